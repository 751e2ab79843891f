// thermo.cpp — occupations, effective temperatures, block thermal statistics.

#include "dicke/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dicke {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// log(sinh(z)/z), finite and monotone for z > 0.
double log_sinh_ratio(double z) {
    if (z < 1e-4) return z * z / 6.0;
    if (z < 20.0) return std::log(std::sinh(z) / z);
    return z - std::log(2.0 * z) + std::log1p(-std::exp(-2.0 * z));
}

void check_block(int twice_j) {
    if (twice_j < 0) throw std::domain_error("thermo: negative J");
}

double checked_x(double x) {
    if (std::isnan(x) || x < 0.0)
        throw std::domain_error("thermo: x = hbar*omega/kB*T must be nonnegative");
    return x;
}

}  // namespace

double NaturalUnits::t0() const {
    if (!(omega0 > 0.0)) throw std::domain_error("thermo: omega0 must be positive");
    return hbar * omega0 / boltzmann_kb;
}

double NaturalUnits::x_of(double kelvin) const {
    if (kelvin < 0.0) throw std::domain_error("thermo: negative temperature");
    if (kelvin == 0.0) return inf;
    return t0() / kelvin;
}

double bose_from_x(double x) {
    checked_x(x);
    if (x == 0.0) throw std::domain_error("thermo: occupation diverges at x = 0");
    return 1.0 / std::expm1(x);  // expm1 overflow gives +inf, hence exactly 0
}

double bose_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw std::domain_error("thermo: omega must be positive");
    if (temperature < 0.0) throw std::domain_error("thermo: negative temperature");
    if (temperature == 0.0) return 0.0;
    return bose_from_x(hbar * omega / (boltzmann_kb * temperature));
}

double tstar_x_two_bath(double gamma_h, double n_h, double gamma_c, double n_c) {
    if (gamma_h < 0.0 || gamma_c < 0.0 || n_h < 0.0 || n_c < 0.0)
        throw std::domain_error("thermo: rates and occupations must be nonnegative");
    const double total = gamma_h + gamma_c;
    if (total == 0.0) throw std::domain_error("thermo: both couplings vanish");
    const double up = gamma_h * n_h + gamma_c * n_c;
    if (up == 0.0) return inf;  // both baths at T = 0
    // down/up = 1 + (gamma_h + gamma_c)/up, since down - up is coupling-only
    return std::log1p(total / up);
}

double effective_temperature(const BathSpec& hot, const BathSpec& cold,
                             const NaturalUnits& units) {
    const double n_h = bose_occupation(units.omega0, hot.temperature);
    const double n_c = bose_occupation(units.omega0, cold.temperature);
    const double xs = tstar_x_two_bath(hot.rate, n_h, cold.rate, n_c);
    if (std::isinf(xs)) return 0.0;
    const double tstar = units.t0() / xs;
    return std::clamp(tstar, std::min(hot.temperature, cold.temperature),
                      std::max(hot.temperature, cold.temperature));
}

double effective_temperature_with_parasitic(double qubit_omega, double primary_rate,
                                            const BathSpec& hot, const BathSpec& cold,
                                            const BathSpec& parasitic) {
    if (!(qubit_omega > 0.0)) throw std::domain_error("thermo: omega must be positive");
    if (primary_rate < 0.0 || parasitic.rate < 0.0)
        throw std::domain_error("thermo: rates must be nonnegative");
    const NaturalUnits at_qubit{qubit_omega};
    if (parasitic.rate == 0.0)
        return effective_temperature({hot.temperature, primary_rate, BathRole::hot},
                                     {cold.temperature, primary_rate, BathRole::cold},
                                     at_qubit);
    const double n_h = bose_occupation(qubit_omega, hot.temperature);
    const double n_c = bose_occupation(qubit_omega, cold.temperature);
    const double n_p = bose_occupation(qubit_omega, parasitic.temperature);
    const double up = primary_rate * (n_h + n_c) + parasitic.rate * n_p;
    const double down = primary_rate * (n_h + n_c + 2.0) + parasitic.rate * (n_p + 1.0);
    if (up == 0.0) return 0.0;
    const double tstar = at_qubit.t0() / std::log(down / up);
    const double lo = std::min({hot.temperature, cold.temperature, parasitic.temperature});
    const double hi = std::max({hot.temperature, cold.temperature, parasitic.temperature});
    return std::clamp(tstar, lo, hi);
}

std::vector<double> block_boltzmann(int twice_j, double x) {
    check_block(twice_j);
    checked_x(x);
    const std::size_t n = static_cast<std::size_t>(twice_j) + 1;
    std::vector<double> p(n, 0.0);
    if (std::isinf(x)) {
        p[0] = 1.0;  // m = -J
        return p;
    }
    if (x == 0.0) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(n));
        return p;
    }
    // weights relative to the bottom of the band; summed smallest-first
    double sum = 0.0;
    for (std::size_t k = n; k-- > 0;) {
        p[k] = std::exp(-static_cast<double>(k) * x);
        sum += p[k];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> thermal_block_distribution(int twice_j, double temperature,
                                               const NaturalUnits& units) {
    return block_boltzmann(twice_j, units.x_of(temperature));
}

double log_partition_x(int twice_j, double x) {
    check_block(twice_j);
    checked_x(x);
    if (std::isinf(x)) return inf;
    if (x == 0.0) return std::log(static_cast<double>(twice_j) + 1.0);
    if (x >= 45.0) return 0.5 * static_cast<double>(twice_j) * x;
    const double a = 0.5 * (static_cast<double>(twice_j) + 1.0) * x;
    const double b = 0.5 * x;
    return std::log(static_cast<double>(twice_j) + 1.0) + log_sinh_ratio(a) -
           log_sinh_ratio(b);
}

double log_partition_function(int twice_j, double temperature, const NaturalUnits& units) {
    return log_partition_x(twice_j, units.x_of(temperature));
}

double partition_function(int twice_j, double temperature, const NaturalUnits& units) {
    return std::exp(log_partition_function(twice_j, temperature, units));
}

double mean_jz_x(int twice_j, double x) {
    check_block(twice_j);
    checked_x(x);
    if (twice_j == 0) return 0.0;
    if (x == 0.0) return 0.0;
    const double j = 0.5 * static_cast<double>(twice_j);
    if (std::isinf(x)) return -j;
    const double y = (static_cast<double>(twice_j) + 1.0) * x;
    if (y <= 0.3) {
        // (h(x) - h(y))/x with h(z) = (z/2) coth(z/2), Bernoulli coefficients
        static constexpr double c[6] = {1.0 / 12.0,        -1.0 / 720.0,
                                        1.0 / 30240.0,     -1.0 / 1209600.0,
                                        1.0 / 47900160.0,  -691.0 / 1307674368000.0};
        double px = x * x, py = y * y, sum = 0.0;
        for (int k = 0; k < 6; ++k) {
            sum += c[k] * (px - py);
            px *= x * x;
            py *= y * y;
        }
        return sum / x;
    }
    return -j - (static_cast<double>(twice_j) + 1.0) / std::expm1(y) + 1.0 / std::expm1(x);
}

double mean_jz_thermal(int twice_j, double temperature, const NaturalUnits& units) {
    return mean_jz_x(twice_j, units.x_of(temperature));
}

}  // namespace dicke
