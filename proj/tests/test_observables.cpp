// test_observables.cpp — currents, moments, baselines, detuned pair.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "dicke/engines.hpp"
#include "dicke/observables.hpp"

using namespace dicke;

namespace {

const NaturalUnits units{two_pi * 4e9};
const double gamma_unit = two_pi * 1e9;

BathSpec bath(double x, double g, BathRole role) {
    return {units.t0() / x, g * gamma_unit, role};
}

std::shared_ptr<const DickeLedger> ledger_of(int n) {
    return std::make_shared<const DickeLedger>(enumerate_blocks(n));
}

}  // namespace

TEST_CASE("no current between baths at the same temperature") {
    const BathSpec hot = bath(1.5, 1.0, BathRole::hot);
    const BathSpec cold = bath(1.5, 1.0, BathRole::cold);
    const SteadyDistribution dist = analytic_fixed_subspace(8, hot, cold, units);
    const double scale = hbar * units.omega0 * hot.rate;
    CHECK(std::abs(steady_current_collective(dist, hot, cold, units)) <= 1e-14 * scale);
    CHECK(std::abs(bath_current(dist, hot, units)) <= 1e-12 * scale);
    CHECK(std::abs(independent_baseline(5, hot, cold, units)) <= 1e-14 * scale);
}

TEST_CASE("single qubit current anchor") {
    // x_h = 0.5, x_c = 2, equal rates
    const BathSpec hot = bath(0.5, 1.0, BathRole::hot);
    const BathSpec cold = bath(2.0, 1.0, BathRole::cold);
    const double scale = hbar * units.omega0 * hot.rate;
    CHECK(independent_baseline(1, hot, cold, units) / scale ==
          doctest::Approx(0.25666612691241764).epsilon(1e-12));
    // and the N-qubit baseline is N of them
    CHECK(independent_baseline(7, hot, cold, units) ==
          doctest::Approx(7.0 * independent_baseline(1, hot, cold, units))
              .epsilon(1e-14));
}

TEST_CASE("bath-resolved and closed-form collective currents agree") {
    const BathSpec hot = bath(0.5, 1.4, BathRole::hot);
    const BathSpec cold = bath(2.3, 0.7, BathRole::cold);
    for (int tj : {1, 4, 17}) {
        const SteadyDistribution dist = analytic_fixed_subspace(tj, hot, cold, units);
        const double q_closed = steady_current_collective(dist, hot, cold, units);
        const double q_hot = bath_current(dist, hot, units);
        const double q_cold = bath_current(dist, cold, units);
        CHECK(q_closed == doctest::Approx(q_hot).epsilon(1e-10));
        CHECK(q_cold == doctest::Approx(-q_hot).epsilon(1e-10));
    }
}

TEST_CASE("closed-form collective current warns on a three-bath state") {
    const BathSpec hot = bath(0.5, 1.0, BathRole::hot);
    const BathSpec cold = bath(2.0, 1.0, BathRole::cold);
    const BathSpec par = bath(1.0, 0.01, BathRole::parasitic);
    const SteadyDistribution dist =
        solve_steady(build_generator(ledger_of(3), hot, cold, par, units));
    std::vector<std::string> warnings;
    steady_current_collective(dist, hot, cold, units, &warnings);
    CHECK(warnings.size() == 1);
}

TEST_CASE("one qubit collectively coupled is one independent qubit") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> xd(0.1, 6.0);
    std::uniform_real_distribution<double> gd(0.3, 3.0);
    for (int k = 0; k < 100; ++k) {
        BathSpec hot = bath(xd(rng), gd(rng), BathRole::hot);
        BathSpec cold = bath(xd(rng), gd(rng), BathRole::cold);
        if (cold.temperature > hot.temperature)
            std::swap(cold.temperature, hot.temperature);
        const SteadyDistribution dist = analytic_fixed_subspace(1, hot, cold, units);
        const double q = bath_current(dist, hot, units);
        const double q_ind = independent_baseline(1, hot, cold, units);
        CHECK(q == doctest::Approx(q_ind).epsilon(1e-12));
    }
}

TEST_CASE("independent baseline with a silent parasitic channel reduces exactly") {
    const BathSpec hot = bath(0.5, 1.0, BathRole::hot);
    const BathSpec cold = bath(2.0, 1.0, BathRole::cold);
    BathSpec par = bath(1.0, 0.0, BathRole::parasitic);
    CHECK(independent_with_parasitic(4, hot, cold, par, units) ==
          independent_baseline(4, hot, cold, units));
    par.rate = 0.01 * gamma_unit;
    CHECK(independent_with_parasitic(4, hot, cold, par, units) !=
          independent_baseline(4, hot, cold, units));
}

TEST_CASE("a parasitic bath at the effective temperature carries no heat") {
    const BathSpec hot = bath(1.0, 1.0, BathRole::hot);
    const BathSpec cold = bath(3.0, 1.0, BathRole::cold);
    BathSpec par = bath(1.0, 1e-3, BathRole::parasitic);
    par.temperature = effective_temperature(hot, cold, units);
    const SteadyDistribution dist =
        solve_steady(build_generator(ledger_of(4), hot, cold, par, units));
    const double q_par = bath_current(dist, par, units);
    const double q_hot = bath_current(dist, hot, units);
    CHECK(std::abs(q_par) <= 1e-10 * std::abs(q_hot));
}

TEST_CASE("heat report balances the books") {
    const BathSpec hot = bath(0.5, 1.0, BathRole::hot);
    const BathSpec cold = bath(2.0, 1.0, BathRole::cold);
    const BathSpec par = bath(4.0, 0.01, BathRole::parasitic);
    const SteadyDistribution dist =
        solve_steady(build_generator(ledger_of(5), hot, cold, par, units));
    const HeatReport report = make_heat_report(dist, hot, cold, par, units);
    CHECK(report.conservation_defect <= 1e-11);
    CHECK(report.q_hot > 0.0);
    CHECK(report.q_parasitic ==
          doctest::Approx(report.q_parasitic_residual).epsilon(1e-9));
    CHECK(report.mean_j2_normalized <= 1.0 + 1e-12);
    CHECK(report.mean_j2_normalized > 0.0);
}

TEST_CASE("spin moments on simple states") {
    const BathSpec hot = bath(1.0, 1.0, BathRole::hot);
    const BathSpec cold = bath(3.0, 1.0, BathRole::cold);
    const SteadyDistribution block = analytic_fixed_subspace(4, hot, cold, units);
    CHECK(mean_j2(block) == doctest::Approx(6.0).epsilon(1e-13));  // J = 2

    // a two-qubit mixture splits J^2 between triplet and singlet
    const auto ledger = ledger_of(2);
    InitialBlockWeights init;
    init.weight = {{2, 0.7}, {0, 0.3}};
    const SteadyDistribution mix = analytic_block_mixture(ledger, init, hot, cold, units);
    CHECK(mean_j2(mix) == doctest::Approx(0.7 * 2.0).epsilon(1e-12));
    CHECK(mean_j2_normalized(mix) == doctest::Approx(0.7).epsilon(1e-12));

    const auto [jpjm, jmjp] = ladder_moments(block);
    CHECK(jpjm - jmjp == doctest::Approx(2.0 * mean_jz(block)).epsilon(1e-10));
}

TEST_CASE("low and high temperature limits bracket the closed form") {
    const int tj = 16;  // Jbar = 8
    SUBCASE("cold regime saturates at the prefactor times Jbar") {
        const BathSpec hot = bath(39.9, 1.0, BathRole::hot);
        const BathSpec cold = bath(40.1, 1.0, BathRole::cold);
        const SteadyDistribution dist = analytic_fixed_subspace(tj, hot, cold, units);
        const double q = steady_current_collective(dist, hot, cold, units);
        const LimitCurrents lim = limit_currents(tj, hot, cold, units);
        CHECK(q == doctest::Approx(lim.low_temperature).epsilon(1e-6));
    }
    SUBCASE("hot regime grows linearly in x* with the J(J+1)/3 weight") {
        const BathSpec hot = bath(0.9999e-3, 1.0, BathRole::hot);
        const BathSpec cold = bath(1.0001e-3, 1.0, BathRole::cold);
        const SteadyDistribution dist = analytic_fixed_subspace(tj, hot, cold, units);
        const double q = steady_current_collective(dist, hot, cold, units);
        const LimitCurrents lim = limit_currents(tj, hot, cold, units);
        CHECK(q == doctest::Approx(lim.high_temperature).epsilon(1e-3));
    }
}

TEST_CASE("thermodynamic ratio is the half-x cotangent") {
    for (double x : {0.1, 0.5, 1.0, 2.0, 7.0})
        CHECK(thermodynamic_ratio(x) ==
              doctest::Approx(1.0 / std::tanh(0.5 * x)).epsilon(1e-13));
}

TEST_CASE("detuned pair throttles through the resonator filter") {
    const BathSpec hot = bath(0.5, 1.0, BathRole::hot);
    const BathSpec cold = bath(2.0, 1.0, BathRole::cold);
    const double w1 = units.omega0;

    // far detuned second qubit: its share shrinks by roughly the filter factor
    const double q_pair = detuned_two_qubit_current(w1, 0.5 * w1, hot.rate, 20.0, hot,
                                                    cold, std::nullopt, nullptr);
    const double q_single = independent_baseline(1, hot, cold, units);
    CHECK(q_pair > q_single);
    CHECK(q_pair < 1.1 * q_single);

    // on resonance it must be refused: the pair model needs a detuning
    CHECK_THROWS_AS(detuned_two_qubit_current(w1, w1, hot.rate, 20.0, hot, cold,
                                              std::nullopt, nullptr),
                    std::domain_error);

    // nearly resonant second qubit gets flagged
    std::vector<std::string> warnings;
    detuned_two_qubit_current(w1, 1.001 * w1, hot.rate, 20.0, hot, cold, std::nullopt,
                              &warnings);
    CHECK(warnings.size() == 1);
}
