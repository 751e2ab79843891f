// test_circuitmap.cpp — transmon frequency, filtered impedance, bath rates.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dicke/circuitmap.hpp"
#include "dicke/thermo.hpp"

using namespace dicke;

TEST_CASE("transmon frequency from charging and Josephson energies") {
    // E_J = 50 E_C gives hbar*omega = (sqrt(400) - 1) E_C = 19 E_C
    const double ec = planck_h * 0.25e9;
    const TransmonFrequency f = transmon_frequency(50.0 * ec, ec);
    CHECK(f.omega == doctest::Approx(19.0 * ec / hbar).epsilon(1e-13));
    CHECK_FALSE(f.outside_validity);

    // below the E_J/E_C validity ratio the flag trips but the value stands
    const TransmonFrequency low = transmon_frequency(10.0 * ec, ec);
    CHECK(low.outside_validity);
    CHECK(low.omega > 0.0);

    CHECK_THROWS_AS(transmon_frequency(0.0, ec), std::domain_error);
    CHECK_THROWS_AS(transmon_frequency(50.0 * ec, -ec), std::domain_error);
}

TEST_CASE("transmon round trip to a 4 GHz qubit") {
    const double target = two_pi * 4e9;
    const double ec = planck_h * 0.2e9;
    const double ej = std::pow(hbar * target + ec, 2) / (8.0 * ec);
    CHECK(transmon_frequency(ej, ec).omega == doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("filtered impedance") {
    const double r = 50.0, wlc = two_pi * 8e9, q = 20.0;
    CHECK(lorentzian_impedance(wlc, r, wlc, q) == doctest::Approx(r).epsilon(1e-14));
    // half the resonance frequency: 1 + Q^2 (1/2 - 2)^2 = 1 + 900
    CHECK(lorentzian_impedance(0.5 * wlc, r, wlc, q) ==
          doctest::Approx(r / 901.0).epsilon(1e-13));
    CHECK(lorentzian_impedance(2.0 * wlc, r, wlc, q) ==
          doctest::Approx(r / 901.0).epsilon(1e-13));
    CHECK_THROWS_AS(lorentzian_impedance(-wlc, r, wlc, q), std::domain_error);
    CHECK_THROWS_AS(lorentzian_impedance(wlc, r, 0.0, q), std::domain_error);
}

TEST_CASE("coupling and microscopic rate scalings") {
    CircuitParams circuit;
    circuit.charging_energy = planck_h * 0.2e9;
    circuit.josephson_energy =
        std::pow(hbar * two_pi * 4e9 + circuit.charging_energy, 2) /
        (8.0 * circuit.charging_energy);
    circuit.resonator_frequency = two_pi * 8e9;
    circuit.transmon_impedance = 50.0;
    circuit.hot = BathCircuit{50.0, 20.0, 0.05};
    circuit.cold = BathCircuit{50.0, 20.0, 0.05};

    const double omega0 = transmon_frequency(circuit.josephson_energy,
                                             circuit.charging_energy).omega;
    const double g = microscopic_rate(omega0, circuit, BathRole::hot);
    CHECK(g > 0.0);

    // doubling the coupling capacitance ratio quadruples the rate
    CircuitParams strong = circuit;
    strong.hot.coupling_ratio *= 2.0;
    CHECK(microscopic_rate(omega0, strong, BathRole::hot) ==
          doctest::Approx(4.0 * g).epsilon(1e-12));

    // rate is linear in the real impedance seen at the qubit frequency
    CircuitParams damped = circuit;
    damped.hot.resistance *= 3.0;
    CHECK(microscopic_rate(omega0, damped, BathRole::hot) ==
          doctest::Approx(3.0 * g).epsilon(1e-12));
}

TEST_CASE("detuning throttles the rate through the filter") {
    const double g1 = two_pi * 1e9;
    const double w1 = two_pi * 4e9;
    // second qubit at half the frequency of a Q = 20 filter centered on w1
    CHECK(detuned_rate(g1, 0.5 * w1, w1, 20.0) ==
          doctest::Approx(g1 / 901.0).epsilon(1e-13));
    CHECK(detuned_rate(g1, w1, w1, 20.0) == doctest::Approx(g1).epsilon(1e-14));
    CHECK_THROWS_AS(detuned_rate(-g1, 0.5 * w1, w1, 20.0), std::domain_error);
}
