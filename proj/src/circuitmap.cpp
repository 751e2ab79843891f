// circuitmap.cpp — circuit-level parameters reduced to model rates.

#include "dicke/circuitmap.hpp"

#include <cmath>
#include <stdexcept>

namespace dicke {

TransmonFrequency transmon_frequency(double josephson_energy, double charging_energy) {
    if (!(josephson_energy > 0.0) || !(charging_energy > 0.0))
        throw std::domain_error("circuitmap: energies must be positive");
    TransmonFrequency out;
    out.omega = (std::sqrt(8.0 * josephson_energy * charging_energy) - charging_energy) / hbar;
    out.outside_validity = josephson_energy / charging_energy < transmon_validity_ratio;
    return out;
}

double lorentzian_impedance(double omega, double resistance, double omega_lc,
                            double quality_factor) {
    if (!(omega > 0.0) || !(omega_lc > 0.0))
        throw std::domain_error("circuitmap: frequencies must be positive");
    if (resistance < 0.0 || quality_factor < 0.0)
        throw std::domain_error("circuitmap: resistance and Q must be nonnegative");
    const double detune = omega / omega_lc - omega_lc / omega;
    const double qd = quality_factor * detune;
    return resistance / (1.0 + qd * qd);
}

double coupling_strength(double coupling_ratio, double transmon_impedance) {
    if (coupling_ratio < 0.0)
        throw std::domain_error("circuitmap: coupling ratio must be nonnegative");
    if (!(transmon_impedance > 0.0))
        throw std::domain_error("circuitmap: impedance must be positive");
    return 2.0 * coupling_ratio * std::sqrt(2.0 / (hbar * transmon_impedance));
}

double microscopic_rate(double omega0, const CircuitParams& circuit, BathRole which) {
    if (which == BathRole::parasitic)
        throw std::domain_error("circuitmap: only hot and cold branches are wired");
    const BathCircuit& b = which == BathRole::hot ? circuit.hot : circuit.cold;
    const double g = coupling_strength(b.coupling_ratio, circuit.transmon_impedance);
    const double re_z = lorentzian_impedance(omega0, b.resistance,
                                             circuit.resonator_frequency, b.quality_factor);
    return 4.0 * hbar * omega0 * g * g * re_z;
}

double detuned_rate(double gamma_on_resonance, double omega, double omega_lc,
                    double quality_factor) {
    if (gamma_on_resonance < 0.0)
        throw std::domain_error("circuitmap: rates must be nonnegative");
    // reuse the Lorentzian with unit resistance as the pure filter factor
    return gamma_on_resonance * lorentzian_impedance(omega, 1.0, omega_lc, quality_factor);
}

}  // namespace dicke
