// full_oracle.cpp — exact steady state of the full 2^N master equation,
// built on the computational basis with no knowledge of the block engine.

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "dicke/engines.hpp"
#include "dicke/errors.hpp"

namespace dicke {

namespace {

using cplx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cplx>;
using Trip = Eigen::Triplet<cplx>;

SpMat speye(int dim) {
    SpMat id(dim, dim);
    id.setIdentity();
    return id;
}

// bit i of a basis index set = qubit i excited
SpMat collective_lower(int n) {
    const int dim = 1 << n;
    std::vector<Trip> trips;
    for (int b = 0; b < dim; ++b)
        for (int i = 0; i < n; ++i)
            if (b & (1 << i)) trips.emplace_back(b ^ (1 << i), b, cplx{1.0, 0.0});
    SpMat a(dim, dim);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

SpMat local_lower(int n, int qubit) {
    const int dim = 1 << n;
    std::vector<Trip> trips;
    for (int b = 0; b < dim; ++b)
        if (b & (1 << qubit)) trips.emplace_back(b ^ (1 << qubit), b, cplx{1.0, 0.0});
    SpMat a(dim, dim);
    a.setFromTriplets(trips.begin(), trips.end());
    return a;
}

Eigen::VectorXd jz_diagonal(int n) {
    const int dim = 1 << n;
    Eigen::VectorXd d(dim);
    for (int b = 0; b < dim; ++b)
        d(b) = std::popcount(static_cast<unsigned>(b)) - 0.5 * n;
    return d;
}

// rate * (conj(A) kron A - 1/2 I kron A^H A - 1/2 (A^H A)^T kron I),
// column-stacking convention
void add_dissipator(SpMat& l, const SpMat& a, double rate, const SpMat& id) {
    if (rate <= 0.0) return;
    SpMat ac = a.conjugate();
    SpMat ada = SpMat(SpMat(a.adjoint()) * a).pruned();
    SpMat adat = SpMat(ada.transpose());
    l += rate * SpMat(Eigen::kroneckerProduct(ac, a));
    l -= 0.5 * rate * SpMat(Eigen::kroneckerProduct(id, ada));
    l -= 0.5 * rate * SpMat(Eigen::kroneckerProduct(adat, id));
}

struct JmBasis {
    Eigen::MatrixXd vectors;          // columns, one per eigenstate
    std::vector<StateLabel> labels;   // (2J, 2m) per column
};

// Simultaneous eigenbasis of J^2 and J_z via the spectrum of one combined
// operator whose eigenvalues separate every (J, m) pair by at least one.
JmBasis jm_eigenbasis(int n, const DickeLedger& ledger) {
    const int dim = 1 << n;
    const Eigen::MatrixXd jm = Eigen::MatrixXd(collective_lower(n).real());
    const Eigen::VectorXd jz = jz_diagonal(n);
    Eigen::MatrixXd j2 = jm * jm.transpose();  // J- J+
    j2.diagonal() += (jz.array() * (jz.array() + 1.0)).matrix();
    Eigen::MatrixXd disc = (n + 2.0) * j2;
    disc.diagonal() += jz;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(disc);
    if (es.info() != Eigen::Success)
        throw SolverError("oracle: angular momentum eigenbasis failed");

    JmBasis basis;
    basis.vectors = es.eigenvectors();
    basis.labels.resize(static_cast<std::size_t>(dim));
    for (int col = 0; col < dim; ++col) {
        const double lambda = es.eigenvalues()(col);
        bool found = false;
        for (const DickeBlock& block : ledger.blocks) {
            const int tj = block.twice_j;
            const double base = (n + 2.0) * tj * (tj + 2.0) / 4.0;
            for (int tm : block.twice_m) {
                if (std::abs(lambda - (base + 0.5 * tm)) < 1e-6) {
                    basis.labels[static_cast<std::size_t>(col)] = {tj, tm};
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found)
            throw SolverError("oracle: eigenvalue does not match any (J, m) pair");
    }
    return basis;
}

// Invariant-subspace basis of the kernel by shift-inverted subspace
// iteration; deterministic start, dense factorization.
Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& shifted,
                              const Eigen::MatrixXcd& check, double scale,
                              Eigen::Index k, unsigned seed) {
    const Eigen::Index m = shifted.rows();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd x(m, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < m; ++i) x(i, j) = cplx{gauss(rng), gauss(rng)};

    const auto orthonormalize = [&](Eigen::MatrixXcd& y) {
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
        y = qr.householderQ() * Eigen::MatrixXcd::Identity(m, k);
    };
    orthonormalize(x);
    for (int iter = 0; iter < 100; ++iter) {
        x = lu.solve(x);
        orthonormalize(x);
        const double defect = (check * x).cwiseAbs().maxCoeff() / scale;
        if (defect < 2e-11) return x;
    }
    throw SolverError("oracle: kernel iteration did not converge");
}

double liouvillian_scale(const SpMat& l) {
    double scale = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        scale = std::max(scale, std::abs(l.coeff(i, i)));
    return scale;
}

}  // namespace

SteadyDistribution full_space_oracle(int n_qubits, const BathSpec& hot,
                                     const BathSpec& cold,
                                     const std::optional<BathSpec>& parasitic,
                                     const NaturalUnits& units,
                                     const std::optional<InitialBlockWeights>& init) {
    if (n_qubits < 1) throw std::domain_error("oracle: need at least one qubit");
    if (n_qubits > oracle_qubit_cap)
        throw std::length_error("oracle: exact path stops at N = " +
                                std::to_string(oracle_qubit_cap));
    if (parasitic && parasitic->rate < 0.0)
        throw std::domain_error("oracle: negative parasitic coupling");

    const int dim = 1 << n_qubits;
    const Eigen::Index dsq = static_cast<Eigen::Index>(dim) * dim;
    const bool three_bath = parasitic && parasitic->rate > 0.0;
    auto ledger = std::make_shared<DickeLedger>(enumerate_blocks(n_qubits));

    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);

    const SpMat id = speye(dim);
    const SpMat jm = collective_lower(n_qubits);
    const SpMat jp = SpMat(jm.adjoint());

    SpMat l(dsq, dsq);
    {
        SpMat h(dim, dim);
        const Eigen::VectorXd jz = jz_diagonal(n_qubits);
        std::vector<Trip> trips;
        for (int b = 0; b < dim; ++b) trips.emplace_back(b, b, cplx{jz(b), 0.0});
        h.setFromTriplets(trips.begin(), trips.end());
        l = cplx{0.0, -units.omega0} *
            SpMat(SpMat(Eigen::kroneckerProduct(id, h)) -
                  SpMat(Eigen::kroneckerProduct(h, id)));
    }
    add_dissipator(l, jm, hot.rate * (1.0 + n_h) + cold.rate * (1.0 + n_c), id);
    add_dissipator(l, jp, hot.rate * n_h + cold.rate * n_c, id);
    if (three_bath) {
        const double n_p = bose_occupation(units.omega0, parasitic->temperature);
        for (int q = 0; q < n_qubits; ++q) {
            const SpMat sm = local_lower(n_qubits, q);
            add_dissipator(l, sm, parasitic->rate * (1.0 + n_p), id);
            add_dissipator(l, SpMat(sm.adjoint()), parasitic->rate * n_p, id);
        }
    }
    l.makeCompressed();
    const double scale = liouvillian_scale(l);
    if (!(scale > 0.0)) throw SolverError("oracle: empty dynamics");

    SteadyDistribution out;
    out.engine = EngineKind::full_oracle;
    out.n_qubits = n_qubits;
    out.three_bath = three_bath;
    out.ledger = ledger;

    const JmBasis basis = jm_eigenbasis(n_qubits, *ledger);
    Eigen::MatrixXcd rho;

    if (three_bath) {
        if (init)
            out.warnings.push_back(
                "parasitic channel fixes the steady state; initial block weights ignored");
        // swap the strongest population row for the trace constraint
        Eigen::Index anchor = 0;
        double best = -1.0;
        for (int i = 0; i < dim; ++i) {
            const Eigen::Index k = static_cast<Eigen::Index>(i) * (dim + 1);
            const double v = std::abs(l.coeff(k, k));
            if (v > best) {
                best = v;
                anchor = k;
            }
        }
        std::vector<Trip> trips;
        trips.reserve(static_cast<std::size_t>(l.nonZeros()) + static_cast<std::size_t>(dim));
        for (int j = 0; j < l.outerSize(); ++j)
            for (SpMat::InnerIterator it(l, j); it; ++it)
                if (it.row() != anchor) trips.emplace_back(it.row(), it.col(), it.value());
        for (int i = 0; i < dim; ++i)
            trips.emplace_back(anchor, static_cast<Eigen::Index>(i) * (dim + 1),
                               cplx{1.0, 0.0});
        SpMat a(dsq, dsq);
        a.setFromTriplets(trips.begin(), trips.end());
        a.makeCompressed();
        Eigen::SparseLU<SpMat> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success)
            throw SolverError("oracle: sparse factorization failed");
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dsq);
        b(anchor) = 1.0;
        Eigen::VectorXcd v = lu.solve(b);
        for (int pass = 0; pass < 3; ++pass) {
            Eigen::VectorXcd defect = b - a * v;
            if (defect.cwiseAbs().maxCoeff() < 1e-13) break;
            v += lu.solve(defect);
        }
        rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), dim, dim);
    } else {
        if (!init)
            throw std::invalid_argument(
                "oracle: without a parasitic channel the kernel is degenerate; "
                "initial block weights are required");
        init->validate(*ledger);

        // kernel dimension: one copy-pair coherence sector per block
        Eigen::Index kdim = 0;
        for (const DickeBlock& block : ledger->blocks) {
            const mpz_class d2 = block.degeneracy * block.degeneracy;
            kdim += static_cast<Eigen::Index>(d2.get_ui());
        }

        const Eigen::MatrixXcd ld(l);
        const cplx sigma{1e-4 * scale, 0.0};
        const Eigen::MatrixXcd shifted =
            ld - sigma * Eigen::MatrixXcd::Identity(dsq, dsq);
        const Eigen::MatrixXcd right =
            kernel_basis(shifted, ld, scale, kdim, 1234u + static_cast<unsigned>(n_qubits));
        const Eigen::MatrixXcd left =
            kernel_basis(shifted.adjoint(), ld.adjoint(), scale, kdim,
                         4321u + static_cast<unsigned>(n_qubits));

        // initial state: given block weights, flat inside each block
        Eigen::MatrixXd rho0 = Eigen::MatrixXd::Zero(dim, dim);
        for (const auto& [twice_j, weight] : init->weight) {
            if (weight == 0.0) continue;
            Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(dim, dim);
            int count = 0;
            for (int col = 0; col < dim; ++col) {
                if (basis.labels[static_cast<std::size_t>(col)].twice_j != twice_j) continue;
                proj += basis.vectors.col(col) * basis.vectors.col(col).transpose();
                ++count;
            }
            if (count == 0)
                throw std::invalid_argument("oracle: initial weight on a missing block");
            rho0 += (weight / count) * proj;
        }
        const Eigen::MatrixXcd rho0c = rho0.cast<cplx>();
        const Eigen::Map<const Eigen::VectorXcd> vec0(rho0c.data(), dsq);

        // spectral projector onto the kernel along the image
        const Eigen::MatrixXcd gram = left.adjoint() * right;
        const Eigen::VectorXcd c = gram.fullPivLu().solve(left.adjoint() * vec0);
        Eigen::VectorXcd v = right * c;
        rho = Eigen::Map<Eigen::MatrixXcd>(v.data(), dim, dim);
    }

    const double mag = rho.cwiseAbs().maxCoeff();
    const double herm_defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (!(mag > 0.0) || herm_defect > 1e-8 * mag)
        throw SolverError("oracle: steady state is not Hermitian within tolerance");
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double trace = rho.real().trace();
    if (std::abs(trace) < 0.5)
        throw SolverError("oracle: steady-state trace collapsed");
    rho /= trace;

    {
        const Eigen::Map<const Eigen::VectorXcd> vr(rho.data(), dsq);
        out.residual = (l * vr).cwiseAbs().maxCoeff() / scale;
    }
    if (out.residual > 1e-10)
        throw SolverError("oracle: stationarity defect " + std::to_string(out.residual) +
                          " above tolerance");

    Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ledger->size()));
    for (int col = 0; col < dim; ++col) {
        const StateLabel lab = basis.labels[static_cast<std::size_t>(col)];
        const Eigen::VectorXcd v = basis.vectors.col(col).cast<cplx>();
        const double weight = (v.adjoint() * rho * v)(0).real();
        p(static_cast<Eigen::Index>(ledger->index_of(lab.twice_j, lab.twice_m))) += weight;
    }
    int clipped = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) < 0.0) {
            if (p(i) < -1e-12)
                throw SolverError("oracle: projected population below -1e-12");
            p(i) = 0.0;
            ++clipped;
        }
    }
    if (clipped > 0)
        out.warnings.push_back("clipped " + std::to_string(clipped) +
                               " rounding-level negative populations");
    p /= p.sum();

    out.states.reserve(ledger->size());
    for (const DickeBlock& block : ledger->blocks)
        for (int tm : block.twice_m) out.states.push_back({block.twice_j, tm});
    out.p = std::move(p);
    return out;
}

}  // namespace dicke
