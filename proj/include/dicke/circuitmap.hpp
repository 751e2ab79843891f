// circuitmap.hpp — transmon-plus-resonator circuit values mapped onto the
// two-level model inputs: qubit splitting, couplings, bath rates.
#pragma once

#include "dicke/thermo.hpp"

namespace dicke {

struct BathCircuit {
    double resistance{0.0};      // ohm
    double quality_factor{0.0};
    double coupling_ratio{0.0};  // C_c / C_total
};

struct CircuitParams {
    double josephson_energy{0.0};    // J
    double charging_energy{0.0};     // J
    double resonator_frequency{0.0}; // omega_LC, rad/s
    double transmon_impedance{0.0};  // Z_T, ohm
    BathCircuit hot{};
    BathCircuit cold{};
};

// E_J / E_C below this and the anharmonic-oscillator reduction is suspect.
inline constexpr double transmon_validity_ratio = 20.0;

struct TransmonFrequency {
    double omega{0.0};            // rad/s
    bool outside_validity{false}; // E_J/E_C under the transmon threshold
};

// hbar*omega0 = sqrt(8 E_J E_C) - E_C
TransmonFrequency transmon_frequency(double josephson_energy, double charging_energy);

// Re Z(omega) of a parallel RLC seen through its resonance.
double lorentzian_impedance(double omega, double resistance, double omega_lc,
                            double quality_factor);

// G_i = 2 (C_c/C_T) sqrt(2 / (hbar Z_T))
double coupling_strength(double coupling_ratio, double transmon_impedance);

// gamma_i(omega0) for the hot or cold branch of the circuit.
double microscopic_rate(double omega0, const CircuitParams& circuit, BathRole which);

// Rate rolloff for a qubit detuned from the resonator that filters its bath.
double detuned_rate(double gamma_on_resonance, double omega, double omega_lc,
                    double quality_factor);

}  // namespace dicke
