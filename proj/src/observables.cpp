// observables.cpp — currents, moments, and reference baselines.

#include "dicke/observables.hpp"

#include "dicke/circuitmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dicke {

namespace {

double planck_energy(double omega) { return hbar * omega; }

void check_dist(const SteadyDistribution& dist) {
    if (dist.states.empty() ||
        dist.p.size() != static_cast<Eigen::Index>(dist.states.size()))
        throw std::invalid_argument("observables: malformed distribution");
}

}  // namespace

std::pair<double, double> ladder_moments(const SteadyDistribution& dist) {
    check_dist(dist);
    double plus_minus = 0.0, minus_plus = 0.0;
    for (std::size_t i = 0; i < dist.states.size(); ++i) {
        const StateLabel s = dist.states[i];
        const double w = dist.p(static_cast<Eigen::Index>(i));
        plus_minus += w * ladder_squared(s.twice_j, s.twice_m, Ladder::lower);
        minus_plus += w * ladder_squared(s.twice_j, s.twice_m, Ladder::raise);
    }
    return {plus_minus, minus_plus};
}

double mean_jz(const SteadyDistribution& dist) {
    check_dist(dist);
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.states.size(); ++i)
        acc += dist.p(static_cast<Eigen::Index>(i)) * 0.5 * dist.states[i].twice_m;
    return acc;
}

double mean_j2(const SteadyDistribution& dist) {
    check_dist(dist);
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.states.size(); ++i) {
        const double tj = dist.states[i].twice_j;
        acc += dist.p(static_cast<Eigen::Index>(i)) * tj * (tj + 2.0) / 4.0;
    }
    return acc;
}

double mean_j2_normalized(const SteadyDistribution& dist, int n_qubits) {
    check_dist(dist);
    int n = n_qubits > 0 ? n_qubits : dist.n_qubits;
    if (n < 1) {
        // a bare fixed-J block normalizes against its own top
        const int tj = dist.states.front().twice_j;
        for (const StateLabel& s : dist.states)
            if (s.twice_j != tj)
                throw std::invalid_argument(
                    "observables: mixed blocks need an explicit qubit count");
        n = tj;
    }
    const double half_n = 0.5 * n;
    return mean_j2(dist) / (half_n * (half_n + 1.0));
}

double bath_current(const SteadyDistribution& dist, const BathSpec& bath,
                    const NaturalUnits& units) {
    check_dist(dist);
    if (bath.rate < 0.0) throw std::domain_error("observables: negative coupling");
    const double n_occ = bose_occupation(units.omega0, bath.temperature);
    const double quantum = planck_energy(units.omega0);
    if (bath.role == BathRole::parasitic) {
        if (dist.n_qubits < 1)
            throw std::invalid_argument(
                "observables: parasitic current needs the qubit count");
        const double jz = mean_jz(dist);
        const double excited = 0.5 * dist.n_qubits + jz;
        const double ground = 0.5 * dist.n_qubits - jz;
        return quantum * bath.rate * (n_occ * ground - (1.0 + n_occ) * excited);
    }
    const auto [plus_minus, minus_plus] = ladder_moments(dist);
    return quantum * bath.rate * (n_occ * minus_plus - (1.0 + n_occ) * plus_minus);
}

double steady_current_collective(const SteadyDistribution& dist, const BathSpec& hot,
                                 const BathSpec& cold, const NaturalUnits& units,
                                 std::vector<std::string>* warnings) {
    check_dist(dist);
    if (dist.three_bath && warnings)
        warnings->push_back(
            "collective-form current assumes two baths; this distribution was "
            "solved with a parasitic channel");
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    const double total = hot.rate + cold.rate;
    if (!(total > 0.0)) throw std::domain_error("observables: both couplings vanish");
    const double pref = 2.0 * hot.rate * cold.rate / total;
    return planck_energy(units.omega0) * pref * (-mean_jz(dist)) * (n_h - n_c);
}

double independent_baseline(int n_qubits, const BathSpec& hot, const BathSpec& cold,
                            const NaturalUnits& units) {
    if (n_qubits < 1) throw std::domain_error("observables: need at least one qubit");
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    const double denom = cold.rate * (2.0 * n_c + 1.0) + hot.rate * (2.0 * n_h + 1.0);
    if (!(denom > 0.0)) throw std::domain_error("observables: both couplings vanish");
    return n_qubits * planck_energy(units.omega0) * hot.rate * cold.rate *
           (n_h - n_c) / denom;
}

double independent_with_parasitic(int n_qubits, const BathSpec& hot, const BathSpec& cold,
                                  const BathSpec& parasitic, const NaturalUnits& units) {
    if (n_qubits < 1) throw std::domain_error("observables: need at least one qubit");
    if (parasitic.rate < 0.0) throw std::domain_error("observables: negative coupling");
    if (parasitic.rate == 0.0) return independent_baseline(n_qubits, hot, cold, units);
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    const double n_p = bose_occupation(units.omega0, parasitic.temperature);
    const double up = hot.rate * n_h + cold.rate * n_c + parasitic.rate * n_p;
    const double down = hot.rate * (1.0 + n_h) + cold.rate * (1.0 + n_c) +
                        parasitic.rate * (1.0 + n_p);
    const double p_excited = up / (up + down);
    const double p_ground = down / (up + down);
    return n_qubits * planck_energy(units.omega0) * hot.rate *
           (n_h * p_ground - (1.0 + n_h) * p_excited);
}

LimitCurrents limit_currents(int twice_jbar, const BathSpec& hot, const BathSpec& cold,
                             const NaturalUnits& units) {
    if (twice_jbar < 1) throw std::domain_error("observables: need 2*Jbar >= 1");
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    const double total = hot.rate + cold.rate;
    if (!(total > 0.0)) throw std::domain_error("observables: both couplings vanish");
    const double pref =
        planck_energy(units.omega0) * 2.0 * hot.rate * cold.rate / total * (n_h - n_c);
    const double jbar = 0.5 * twice_jbar;
    const double xs = tstar_x_two_bath(hot.rate, n_h, cold.rate, n_c);
    LimitCurrents out;
    out.low_temperature = pref * jbar;
    out.high_temperature = std::isinf(xs) ? 0.0 : pref * xs * jbar * (jbar + 1.0) / 3.0;
    return out;
}

double thermodynamic_ratio(double tstar_x) {
    if (!(tstar_x > 0.0))
        throw std::domain_error("observables: enhancement ratio needs x > 0");
    if (std::isinf(tstar_x)) return 1.0;
    return 1.0 + 2.0 / std::expm1(tstar_x);
}

double detuned_two_qubit_current(double omega1, double omega2, double gamma1,
                                 double quality_factor, const BathSpec& hot,
                                 const BathSpec& cold,
                                 const std::optional<BathSpec>& parasitic,
                                 std::vector<std::string>* warnings) {
    if (!(omega1 > 0.0) || !(omega2 > 0.0))
        throw std::domain_error("observables: frequencies must be positive");
    if (omega1 == omega2)
        throw std::domain_error(
            "observables: degenerate qubits are not independent; this estimate "
            "needs a finite detuning");
    if (gamma1 < 0.0) throw std::domain_error("observables: negative coupling");
    if (warnings && std::abs(omega1 - omega2) < gamma1)
        warnings->push_back("detuning is under one linewidth; treating the pair "
                            "as independent is marginal");

    const double gamma_p = parasitic && parasitic->rate > 0.0 ? parasitic->rate : 0.0;
    double total = 0.0;
    const double omegas[2] = {omega1, omega2};
    const double gammas[2] = {gamma1, detuned_rate(gamma1, omega2, omega1, quality_factor)};
    for (int k = 0; k < 2; ++k) {
        const double n_h = bose_occupation(omegas[k], hot.temperature);
        const double n_c = bose_occupation(omegas[k], cold.temperature);
        const double n_p =
            gamma_p > 0.0 ? bose_occupation(omegas[k], parasitic->temperature) : 0.0;
        const double up = gammas[k] * (n_h + n_c) + gamma_p * n_p;
        const double down = gammas[k] * (n_h + n_c + 2.0) + gamma_p * (1.0 + n_p);
        const double p_excited = up / (up + down);
        total += planck_energy(omegas[k]) * gammas[k] *
                 (n_h * (1.0 - p_excited) - (1.0 + n_h) * p_excited);
    }
    return total;
}

HeatReport make_heat_report(const SteadyDistribution& dist, const BathSpec& hot,
                            const BathSpec& cold, const std::optional<BathSpec>& parasitic,
                            const NaturalUnits& units) {
    HeatReport report;
    BathSpec h = hot;
    h.role = BathRole::hot;
    BathSpec c = cold;
    c.role = BathRole::cold;
    report.q_hot = bath_current(dist, h, units);
    report.q_cold = bath_current(dist, c, units);
    report.q_parasitic_residual = -(report.q_hot + report.q_cold);
    if (parasitic && parasitic->rate > 0.0) {
        BathSpec p = *parasitic;
        p.role = BathRole::parasitic;
        report.q_parasitic = bath_current(dist, p, units);
    }
    const double denom = std::max({std::abs(report.q_hot), std::abs(report.q_cold),
                                   std::abs(report.q_parasitic)});
    const double defect = report.q_hot + report.q_cold + report.q_parasitic;
    report.conservation_defect = denom > 0.0 ? std::abs(defect) / denom : 0.0;
    report.mean_jz = mean_jz(dist);
    report.mean_j2 = mean_j2(dist);
    report.mean_j2_normalized = mean_j2_normalized(dist);
    return report;
}

}  // namespace dicke
