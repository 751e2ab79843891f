// observables.hpp — heat currents, collective-spin moments, and reference
// baselines evaluated on a steady-state distribution.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dicke/engines.hpp"
#include "dicke/thermo.hpp"

namespace dicke {

// <J+J-> and <J-J+> over the distribution.
std::pair<double, double> ladder_moments(const SteadyDistribution& dist);

double mean_jz(const SteadyDistribution& dist);
double mean_j2(const SteadyDistribution& dist);
// <J^2> scaled by its ceiling (N/2)(N/2+1); needs a qubit count on the
// distribution unless one is passed explicitly.
double mean_j2_normalized(const SteadyDistribution& dist, int n_qubits = 0);

// Heat current from one bath into the system, in watts. Hot and cold couple
// through the collective ladder; a parasitic bath couples through the local
// flips, which on (J, m) populations reduce to total excitation counting.
double bath_current(const SteadyDistribution& dist, const BathSpec& bath,
                    const NaturalUnits& units);

// Two-bath collective current in the <-J_z> form. Algebraically equal to
// bath_current for hot/cold-only steady states; warns when handed a
// three-bath distribution, where the identity no longer holds.
double steady_current_collective(const SteadyDistribution& dist, const BathSpec& hot,
                                 const BathSpec& cold, const NaturalUnits& units,
                                 std::vector<std::string>* warnings = nullptr);

// N uncoupled qubits, hot and cold only.
double independent_baseline(int n_qubits, const BathSpec& hot, const BathSpec& cold,
                            const NaturalUnits& units);

// N uncoupled qubits with the parasitic channel included exactly.
double independent_with_parasitic(int n_qubits, const BathSpec& hot, const BathSpec& cold,
                                  const BathSpec& parasitic, const NaturalUnits& units);

// Deep-quantum and classical-plateau asymptotes for a fixed-Jbar valve.
struct LimitCurrents {
    double low_temperature{0.0};   // W
    double high_temperature{0.0};  // W
};
LimitCurrents limit_currents(int twice_jbar, const BathSpec& hot, const BathSpec& cold,
                             const NaturalUnits& units);

// Large-Jbar enhancement ceiling over 2*Jbar independent qubits: coth(x*/2).
double thermodynamic_ratio(double tstar_x);

// Two independent qubits fed through a shared resonator at omega1: the
// second sits detuned at omega2 and sees the filtered rate. Occupations are
// taken at each qubit's own frequency. Returns total hot-bath power, watts.
double detuned_two_qubit_current(double omega1, double omega2, double gamma1,
                                 double quality_factor, const BathSpec& hot,
                                 const BathSpec& cold,
                                 const std::optional<BathSpec>& parasitic,
                                 std::vector<std::string>* warnings = nullptr);

// One-stop bundle the sweep harness writes out per solved point.
struct HeatReport {
    double q_hot{0.0};                 // W, positive into the system
    double q_cold{0.0};
    double q_parasitic{0.0};           // direct evaluation
    double q_parasitic_residual{0.0};  // -(q_hot + q_cold)
    double conservation_defect{0.0};   // relative to the largest |current|
    double mean_jz{0.0};
    double mean_j2{0.0};
    double mean_j2_normalized{0.0};
};

HeatReport make_heat_report(const SteadyDistribution& dist, const BathSpec& hot,
                            const BathSpec& cold, const std::optional<BathSpec>& parasitic,
                            const NaturalUnits& units);

}  // namespace dicke
