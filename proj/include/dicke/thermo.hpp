// thermo.hpp — bath occupations, detailed balance, effective temperatures,
// and closed-form thermal statistics on a single J block.
#pragma once

#include <vector>

namespace dicke {

// 2019 SI exact values. Everything dimensional in the library funnels
// through these two constants.
inline constexpr double planck_h = 6.62607015e-34;    // J s
inline constexpr double boltzmann_kb = 1.380649e-23;  // J / K
inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double hbar = planck_h / two_pi;

struct NaturalUnits {
    double omega0{1.0};  // qubit splitting, rad/s

    double t0() const;                // hbar*omega0 / kB, kelvin
    double x_of(double kelvin) const; // T0 / T; +inf at T = 0
};

enum class BathRole { hot, cold, parasitic };

struct BathSpec {
    double temperature{0.0};  // kelvin, >= 0
    double rate{0.0};         // coupling gamma, rad/s, >= 0
    BathRole role{BathRole::hot};
};

// Planck occupation at frequency omega (rad/s). Zero at T = 0.
double bose_occupation(double omega, double temperature);
// Same thing as a function of x = hbar*omega / kB*T.
double bose_from_x(double x);

// x* = T0/T* for two baths sharing one transition frequency. Works for any
// rate ratio; collapses to x of the common temperature when T_h = T_c.
double tstar_x_two_bath(double gamma_h, double n_h, double gamma_c, double n_c);

// T* in kelvin, occupations evaluated at units.omega0. Always lands between
// the two bath temperatures; returns 0 in the doubly-cold limiting case.
double effective_temperature(const BathSpec& hot, const BathSpec& cold,
                             const NaturalUnits& units);

// Single qubit at qubit_omega coupled to hot and cold with a common rate
// plus a parasitic channel. Reduces to effective_temperature at gamma_p = 0.
double effective_temperature_with_parasitic(double qubit_omega, double primary_rate,
                                            const BathSpec& hot, const BathSpec& cold,
                                            const BathSpec& parasitic);

// Gibbs weights over m = -J..+J (ascending, matching DickeBlock::twice_m).
// Normalized exactly; T = 0 collapses onto m = -J.
std::vector<double> block_boltzmann(int twice_j, double x);
std::vector<double> thermal_block_distribution(int twice_j, double temperature,
                                               const NaturalUnits& units);

// Z = sinh((J+1/2)x)/sinh(x/2). The plain form overflows once J*x grows past
// ~700; the log form is finite for every representable input and is the one
// engines should use.
double partition_function(int twice_j, double temperature, const NaturalUnits& units);
double log_partition_x(int twice_j, double x);
double log_partition_function(int twice_j, double temperature, const NaturalUnits& units);

// <J_z> in the block thermal state. Series branch below (2J+1)x = 0.3 keeps
// the small-x cancellation at full precision.
double mean_jz_x(int twice_j, double x);
double mean_jz_thermal(int twice_j, double temperature, const NaturalUnits& units);

}  // namespace dicke
