// rate_engine.cpp — classical master equation over (J, m) populations plus
// the closed-form thermal engines it cross-checks against.

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dicke/engines.hpp"
#include "dicke/errors.hpp"

namespace dicke {

namespace {

constexpr double solver_target = 1e-12;   // refinement goal, relative
constexpr double solver_ceiling = 1e-11;  // hard acceptance bound
constexpr double negative_floor = -1e-14;

mpz_class deg_or_zero(int n_qubits, int twice_j) {
    if (n_qubits == 0) return mpz_class{twice_j == 0 ? 1 : 0};
    if (n_qubits < 0 || twice_j < 0 || twice_j > n_qubits ||
        (n_qubits - twice_j) % 2 != 0)
        return mpz_class{0};
    return degeneracy(n_qubits, twice_j);
}

// How one local flip out of (J, m) splits across the J-1, J, J+1 blocks.
// Weighted by block multiplicities; everything here is an exact rational
// until the final conversion.
struct LocalSplit {
    double same{0.0};
    double down_j{0.0};
    double up_j{0.0};
};

LocalSplit lowering_split(int n_qubits, int twice_j, int twice_m, const mpz_class& deg) {
    LocalSplit out;
    const mpz_class d_minus = deg_or_zero(n_qubits - 1, twice_j - 1);
    const mpz_class d_plus = deg_or_zero(n_qubits - 1, twice_j + 1);
    const long den_lo = 4L * twice_j * twice_j;
    const long den_hi = 4L * (twice_j + 2) * (twice_j + 2);
    const long lad_same = static_cast<long>(twice_j + twice_m) * (twice_j - twice_m + 2);
    const long lad_down = static_cast<long>(twice_j + twice_m) * (twice_j + twice_m - 2);
    const long lad_up = static_cast<long>(twice_j - twice_m + 2) * (twice_j - twice_m + 4);

    if (lad_same > 0) {
        mpq_class acc{0};
        if (twice_j > 0 && d_minus != 0) {
            mpq_class t(n_qubits * lad_same * d_minus, den_lo * deg);
            t.canonicalize();
            acc += t;
        }
        if (d_plus != 0) {
            mpq_class t(n_qubits * lad_same * d_plus, den_hi * deg);
            t.canonicalize();
            acc += t;
        }
        out.same = acc.get_d();
    }
    if (twice_j >= 2 && lad_down > 0 && d_minus != 0) {
        mpq_class t(n_qubits * lad_down * d_minus, den_lo * deg);
        t.canonicalize();
        out.down_j = t.get_d();
    }
    if (lad_up > 0 && d_plus != 0) {
        mpq_class t(n_qubits * lad_up * d_plus, den_hi * deg);
        t.canonicalize();
        out.up_j = t.get_d();
    }
    return out;
}

LocalSplit raising_split(int n_qubits, int twice_j, int twice_m, const mpz_class& deg) {
    return lowering_split(n_qubits, twice_j, -twice_m, deg);
}

// Generic replace-one-row nullvector solve: the row with the strongest
// diagonal becomes the normalization constraint.
Eigen::VectorXd replace_row_solve_dense(const Eigen::MatrixXd& w) {
    const Eigen::Index m = w.rows();
    Eigen::Index anchor = 0;
    w.diagonal().cwiseAbs().maxCoeff(&anchor);
    Eigen::MatrixXd a = w;
    a.row(anchor).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(anchor) = 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::VectorXd p = lu.solve(b);
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::VectorXd defect = b - a * p;
        if (defect.lpNorm<Eigen::Infinity>() < solver_target) break;
        p += lu.solve(defect);
    }
    return p;
}

Eigen::VectorXd replace_row_solve_sparse(const Eigen::SparseMatrix<double>& w) {
    const Eigen::Index m = w.rows();
    Eigen::Index anchor = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double d = std::abs(w.coeff(i, i));
        if (d > best) {
            best = d;
            anchor = i;
        }
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(w.nonZeros()) + static_cast<std::size_t>(m));
    for (int j = 0; j < w.outerSize(); ++j)
        for (Eigen::SparseMatrix<double>::InnerIterator it(w, j); it; ++it)
            if (it.row() != anchor) trips.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index j = 0; j < m; ++j)
        trips.emplace_back(anchor, j, 1.0);
    Eigen::SparseMatrix<double> a(m, m);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw SolverError("rate engine: sparse factorization failed");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(anchor) = 1.0;
    Eigen::VectorXd p = lu.solve(b);
    for (int pass = 0; pass < 3; ++pass) {
        Eigen::VectorXd defect = b - a * p;
        if (defect.lpNorm<Eigen::Infinity>() < solver_target) break;
        p += lu.solve(defect);
    }
    return p;
}

double generator_scale(const Eigen::SparseMatrix<double>& w) {
    double scale = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i)
        scale = std::max(scale, std::abs(w.coeff(i, i)));
    return scale;
}

void clip_and_normalize(Eigen::VectorXd& p, std::vector<std::string>& warnings) {
    int clipped = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) < 0.0) {
            if (p(i) < negative_floor)
                throw SolverError("rate engine: steady state has a population below -1e-14");
            p(i) = 0.0;
            ++clipped;
        }
    }
    if (clipped > 0)
        warnings.push_back("clipped " + std::to_string(clipped) +
                           " rounding-level negative populations");
    const double total = p.sum();
    if (!(total > 0.0)) throw SolverError("rate engine: steady state summed to zero");
    p /= total;
}

}  // namespace

InitialBlockWeights InitialBlockWeights::top_block(int n_qubits) {
    InitialBlockWeights init;
    init.weight[n_qubits] = 1.0;
    return init;
}

InitialBlockWeights InitialBlockWeights::degeneracy_weighted(const DickeLedger& ledger) {
    InitialBlockWeights init;
    mpz_class total = mpz_class{1} << ledger.n_qubits;
    for (const DickeBlock& block : ledger.blocks) {
        mpq_class q(block.degeneracy * (block.twice_j + 1), total);
        q.canonicalize();
        init.weight[block.twice_j] = q.get_d();
    }
    return init;
}

void InitialBlockWeights::validate(const DickeLedger& ledger) const {
    double total = 0.0;
    for (const auto& [twice_j, value] : weight) {
        if (!ledger.has_block(twice_j))
            throw std::invalid_argument("initial weights: no block with 2J = " +
                                        std::to_string(twice_j));
        if (value < 0.0)
            throw std::invalid_argument("initial weights: negative weight on 2J = " +
                                        std::to_string(twice_j));
        total += value;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("initial weights: sum is " + std::to_string(total) +
                                    ", expected 1");
}

RateGenerator build_generator(std::shared_ptr<const DickeLedger> ledger,
                              const BathSpec& hot, const BathSpec& cold,
                              const std::optional<BathSpec>& parasitic,
                              const NaturalUnits& units) {
    if (!ledger || ledger->blocks.empty())
        throw std::invalid_argument("rate engine: empty ledger");
    if (hot.rate < 0.0 || cold.rate < 0.0)
        throw std::domain_error("rate engine: negative coupling");

    RateGenerator gen;
    gen.ledger = std::move(ledger);
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    gen.hot_down = hot.rate * (1.0 + n_h);
    gen.hot_up = hot.rate * n_h;
    gen.cold_down = cold.rate * (1.0 + n_c);
    gen.cold_up = cold.rate * n_c;
    if (parasitic && parasitic->rate < 0.0)
        throw std::domain_error("rate engine: negative parasitic coupling");
    if (parasitic && parasitic->rate > 0.0) {
        const double n_p = bose_occupation(units.omega0, parasitic->temperature);
        gen.local_down = parasitic->rate * (1.0 + n_p);
        gen.local_up = parasitic->rate * n_p;
        gen.has_parasitic = true;
    }

    const DickeLedger& led = *gen.ledger;
    const int n = led.n_qubits;
    const std::size_t m_total = led.size();
    const double coll_down = gen.hot_down + gen.cold_down;
    const double coll_up = gen.hot_up + gen.cold_up;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m_total * 8);
    std::vector<double> outflow(m_total, 0.0);

    auto emit = [&](std::size_t from, int tj_to, int tm_to, double rate) {
        if (rate <= 0.0) return;
        trips.emplace_back(static_cast<Eigen::Index>(led.index_of(tj_to, tm_to)),
                           static_cast<Eigen::Index>(from), rate);
        outflow[from] += rate;
    };

    for (const DickeBlock& block : led.blocks) {
        const int tj = block.twice_j;
        for (int tm : block.twice_m) {
            const std::size_t i = led.index_of(tj, tm);
            emit(i, tj, tm - 2, coll_down * ladder_squared(tj, tm, Ladder::lower));
            emit(i, tj, tm + 2, coll_up * ladder_squared(tj, tm, Ladder::raise));
            if (gen.has_parasitic) {
                const LocalSplit lo = lowering_split(n, tj, tm, block.degeneracy);
                emit(i, tj, tm - 2, gen.local_down * lo.same);
                emit(i, tj - 2, tm - 2, gen.local_down * lo.down_j);
                emit(i, tj + 2, tm - 2, gen.local_down * lo.up_j);
                const LocalSplit hi = raising_split(n, tj, tm, block.degeneracy);
                emit(i, tj, tm + 2, gen.local_up * hi.same);
                emit(i, tj - 2, tm + 2, gen.local_up * hi.down_j);
                emit(i, tj + 2, tm + 2, gen.local_up * hi.up_j);
            }
        }
    }
    for (std::size_t i = 0; i < m_total; ++i)
        trips.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i),
                           -outflow[i]);

    gen.w.resize(static_cast<Eigen::Index>(m_total), static_cast<Eigen::Index>(m_total));
    gen.w.setFromTriplets(trips.begin(), trips.end());
    gen.w.makeCompressed();

    // re-anchor the diagonal against the assembled column, so column sums
    // vanish to the last bit in storage order
    for (int j = 0; j < gen.w.outerSize(); ++j) {
        double off = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(gen.w, j); it; ++it)
            if (it.row() != j) off += it.value();
        gen.w.coeffRef(j, j) = -off;
    }
    return gen;
}

std::vector<RateGenerator::ChannelTag> RateGenerator::classify(std::size_t row,
                                                               std::size_t col) const {
    std::vector<ChannelTag> tags;
    if (!ledger) throw std::invalid_argument("rate engine: generator has no ledger");
    if (row == col) return tags;
    const auto [tj_from, tm_from] = ledger->state_at(col);
    const auto [tj_to, tm_to] = ledger->state_at(row);
    const int dj = tj_to - tj_from;
    const int dm = tm_to - tm_from;
    if (dm != -2 && dm != 2) return tags;
    const bool emission = dm == -2;

    if (dj == 0) {
        const double lad =
            ladder_squared(tj_from, tm_from, emission ? Ladder::lower : Ladder::raise);
        if (lad > 0.0) {
            const double h = (emission ? hot_down : hot_up) * lad;
            const double c = (emission ? cold_down : cold_up) * lad;
            if (h > 0.0) tags.push_back({BathRole::hot, emission, h});
            if (c > 0.0) tags.push_back({BathRole::cold, emission, c});
        }
    }
    if (has_parasitic && (dj == 0 || dj == -2 || dj == 2)) {
        const mpz_class& deg = ledger->block_of(tj_from).degeneracy;
        const LocalSplit split = emission
                                     ? lowering_split(ledger->n_qubits, tj_from, tm_from, deg)
                                     : raising_split(ledger->n_qubits, tj_from, tm_from, deg);
        const double coeff = dj == 0 ? split.same : (dj == -2 ? split.down_j : split.up_j);
        const double rate = (emission ? local_down : local_up) * coeff;
        if (rate > 0.0) tags.push_back({BathRole::parasitic, emission, rate});
    }
    return tags;
}

SteadyDistribution solve_steady(const RateGenerator& gen,
                                const std::optional<InitialBlockWeights>& init) {
    if (!gen.ledger) throw std::invalid_argument("rate engine: generator has no ledger");
    const DickeLedger& led = *gen.ledger;
    const std::size_t m_total = led.size();

    SteadyDistribution out;
    out.engine = EngineKind::rate_equation;
    out.n_qubits = led.n_qubits;
    out.three_bath = gen.has_parasitic;
    out.ledger = gen.ledger;
    out.states.reserve(m_total);
    for (const DickeBlock& block : led.blocks)
        for (int tm : block.twice_m)
            out.states.push_back({block.twice_j, tm});

    Eigen::VectorXd p;
    if (!gen.has_parasitic) {
        if (!init)
            throw std::invalid_argument(
                "rate engine: without a parasitic channel each J block keeps its weight; "
                "initial block weights are required");
        init->validate(led);
        p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_total));
        for (const auto& [twice_j, weight] : init->weight) {
            if (weight == 0.0) continue;
            const DickeBlock& block = led.block_of(twice_j);
            const std::size_t off = led.block_offset[led.block_index(twice_j)];
            const Eigen::Index span = static_cast<Eigen::Index>(block.twice_m.size());
            Eigen::MatrixXd wj = Eigen::MatrixXd::Zero(span, span);
            for (Eigen::Index j = 0; j < span; ++j)
                for (Eigen::SparseMatrix<double>::InnerIterator it(
                         gen.w, static_cast<Eigen::Index>(off) + j);
                     it; ++it)
                    wj(it.row() - static_cast<Eigen::Index>(off), j) = it.value();
            Eigen::VectorXd q = replace_row_solve_dense(wj);
            double sum = q.sum();
            if (!(sum > 0.0)) throw SolverError("rate engine: block solve degenerated");
            p.segment(static_cast<Eigen::Index>(off), span) = (weight / sum) * q;
        }
    } else {
        if (init)
            out.warnings.push_back(
                "parasitic channel fixes the steady state; initial block weights ignored");
        p = m_total <= 1024 ? replace_row_solve_dense(Eigen::MatrixXd(gen.w))
                            : replace_row_solve_sparse(gen.w);
    }

    clip_and_normalize(p, out.warnings);
    const double scale = generator_scale(gen.w);
    if (!(scale > 0.0)) throw SolverError("rate engine: generator has no dynamics");
    out.residual = (gen.w * p).lpNorm<Eigen::Infinity>() / scale;
    if (out.residual > solver_ceiling)
        throw SolverError("rate engine: stationarity defect " +
                          std::to_string(out.residual) + " above tolerance");
    out.p = std::move(p);
    return out;
}

SteadyDistribution analytic_fixed_subspace(int twice_jbar, const BathSpec& hot,
                                           const BathSpec& cold,
                                           const NaturalUnits& units) {
    if (twice_jbar < 1)
        throw std::domain_error("analytic engine: need 2*Jbar >= 1");
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    const double down = hot.rate * (1.0 + n_h) + cold.rate * (1.0 + n_c);
    const double up = hot.rate * n_h + cold.rate * n_c;
    const double xs = tstar_x_two_bath(hot.rate, n_h, cold.rate, n_c);

    SteadyDistribution out;
    out.engine = EngineKind::analytic;
    out.n_qubits = 0;
    const std::vector<double> weights = block_boltzmann(twice_jbar, xs);
    out.p = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                              static_cast<Eigen::Index>(weights.size()));
    out.states.reserve(weights.size());
    for (int tm = -twice_jbar; tm <= twice_jbar; tm += 2)
        out.states.push_back({twice_jbar, tm});

    // stationarity defect of the closed form against the actual birth-death
    // flows, relative to the largest total escape rate
    double worst = 0.0, scale = 0.0;
    const Eigen::Index span = out.p.size();
    for (Eigen::Index k = 0; k < span; ++k) {
        const int tm = out.states[static_cast<std::size_t>(k)].twice_m;
        const double esc = down * ladder_squared(twice_jbar, tm, Ladder::lower) +
                           up * ladder_squared(twice_jbar, tm, Ladder::raise);
        double flow = -esc * out.p(k);
        if (k + 1 < span)
            flow += down * ladder_squared(twice_jbar, tm + 2, Ladder::lower) * out.p(k + 1);
        if (k > 0)
            flow += up * ladder_squared(twice_jbar, tm - 2, Ladder::raise) * out.p(k - 1);
        worst = std::max(worst, std::abs(flow));
        scale = std::max(scale, esc);
    }
    out.residual = scale > 0.0 ? worst / scale : 0.0;
    return out;
}

SteadyDistribution analytic_block_mixture(std::shared_ptr<const DickeLedger> ledger,
                                          const InitialBlockWeights& init,
                                          const BathSpec& hot, const BathSpec& cold,
                                          const NaturalUnits& units) {
    if (!ledger) throw std::invalid_argument("analytic engine: empty ledger");
    init.validate(*ledger);
    const DickeLedger& led = *ledger;

    SteadyDistribution out;
    out.engine = EngineKind::analytic;
    out.n_qubits = led.n_qubits;
    out.ledger = ledger;
    out.p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(led.size()));
    double residual = 0.0;
    for (const DickeBlock& block : led.blocks) {
        for (int tm : block.twice_m) out.states.push_back({block.twice_j, tm});
        const auto it = init.weight.find(block.twice_j);
        const double weight = it == init.weight.end() ? 0.0 : it->second;
        if (weight == 0.0) continue;
        if (block.twice_j == 0) {
            out.p(static_cast<Eigen::Index>(led.index_of(0, 0))) = weight;
            continue;
        }
        SteadyDistribution sub = analytic_fixed_subspace(block.twice_j, hot, cold, units);
        const std::size_t off = led.block_offset[led.block_index(block.twice_j)];
        out.p.segment(static_cast<Eigen::Index>(off), sub.p.size()) = weight * sub.p;
        residual = std::max(residual, sub.residual);
    }
    out.residual = residual;
    return out;
}

}  // namespace dicke
