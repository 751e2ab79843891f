// harness.cpp — JSON run configs, figure presets, the sweep driver, and
// deterministic CSV emission.

#include "dicke/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dicke/errors.hpp"

namespace dicke {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double as_number(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number())
        throw ConfigError("config: " + where + " must be a number");
    return j.get<double>();
}

int as_int(const nlohmann::json& j, const std::string& where) {
    const double v = as_number(j, where);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        throw ConfigError("config: " + where + " must be an integer");
    return static_cast<int>(r);
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (const auto& item : j.items()) {
        if (std::find_if(known.begin(), known.end(), [&](const char* k) {
                return item.key() == k;
            }) == known.end())
            throw ConfigError("config: unknown key '" + item.key() + "' in " + where);
    }
}

int twice_jbar_from(double jbar, const std::string& where) {
    const long long twice = std::llround(2.0 * jbar);
    if (std::abs(2.0 * jbar - static_cast<double>(twice)) > 1e-9 || twice < 1)
        throw ConfigError("config: " + where + " must be a positive half-integer");
    return static_cast<int>(twice);
}

double rate_from_ghz(double ghz, bool angular, const std::string& where) {
    if (ghz < 0.0) throw ConfigError("config: negative rate in " + where);
    return ghz * 1e9 * (angular ? 1.0 : two_pi);
}

double kelvin_from_ratio(double ratio, const NaturalUnits& units, const std::string& where) {
    if (!(ratio > 0.0))
        throw ConfigError("config: " + where + " must be positive");
    return units.t0() / ratio;
}

double kelvin_from_nu_ghz(double nu, const std::string& where) {
    if (nu < 0.0) throw ConfigError("config: negative frequency in " + where);
    return planck_h * nu * 1e9 / boltzmann_kb;
}

BathSpec parse_bath(const nlohmann::json& b, BathRole role, const NaturalUnits& units,
                    bool angular, const std::string& name) {
    if (!b.is_object()) throw ConfigError("config: bath '" + name + "' must be an object");
    reject_unknown(b,
                   {"temperature_mk", "temperature_k", "nu_ghz", "t0_over_t", "rate_ghz",
                    "rate_over_omega0"},
                   "bath '" + name + "'");
    BathSpec spec;
    spec.role = role;

    int temps = 0;
    if (b.contains("temperature_mk")) {
        const double v = as_number(b["temperature_mk"], name + ".temperature_mk");
        if (v < 0.0) throw ConfigError("config: negative temperature in " + name);
        spec.temperature = v * 1e-3;
        ++temps;
    }
    if (b.contains("temperature_k")) {
        const double v = as_number(b["temperature_k"], name + ".temperature_k");
        if (v < 0.0) throw ConfigError("config: negative temperature in " + name);
        spec.temperature = v;
        ++temps;
    }
    if (b.contains("nu_ghz")) {
        spec.temperature =
            kelvin_from_nu_ghz(as_number(b["nu_ghz"], name + ".nu_ghz"), name + ".nu_ghz");
        ++temps;
    }
    if (b.contains("t0_over_t")) {
        spec.temperature = kelvin_from_ratio(as_number(b["t0_over_t"], name + ".t0_over_t"),
                                             units, name + ".t0_over_t");
        ++temps;
    }
    if (temps != 1)
        throw ConfigError("config: bath '" + name +
                          "' needs exactly one temperature entry, found " +
                          std::to_string(temps));

    int rates = 0;
    if (b.contains("rate_ghz")) {
        spec.rate = rate_from_ghz(as_number(b["rate_ghz"], name + ".rate_ghz"), angular,
                                  name + ".rate_ghz");
        ++rates;
    }
    if (b.contains("rate_over_omega0")) {
        const double v = as_number(b["rate_over_omega0"], name + ".rate_over_omega0");
        if (v < 0.0) throw ConfigError("config: negative rate in " + name);
        spec.rate = v * units.omega0;
        ++rates;
    }
    if (rates != 1)
        throw ConfigError("config: bath '" + name + "' needs exactly one rate entry, found " +
                          std::to_string(rates));
    return spec;
}

const char* const sweep_parameters[] = {
    "jbar",          "n_qubits",
    "t0_over_th",    "t0_over_tc",    "t0_over_tp",
    "hot.temperature_mk", "cold.temperature_mk", "parasitic.temperature_mk",
    "hot.nu_ghz",    "cold.nu_ghz",   "parasitic.nu_ghz",
    "hot.rate_ghz",  "cold.rate_ghz", "parasitic.rate_ghz",
    "hot.rate_over_omega0", "cold.rate_over_omega0", "parasitic.rate_over_omega0"};

bool known_parameter(const std::string& p) {
    for (const char* const k : sweep_parameters)
        if (p == k) return true;
    return false;
}

std::vector<double> axis_values(const nlohmann::json& ax, const std::string& where) {
    if (ax.contains("values")) {
        if (ax.contains("from") || ax.contains("to") || ax.contains("points") ||
            ax.contains("scale"))
            throw ConfigError("config: " + where + " mixes 'values' with a range");
        std::vector<double> out;
        for (const auto& v : ax["values"]) out.push_back(as_number(v, where + ".values"));
        if (out.empty()) throw ConfigError("config: " + where + " has no values");
        return out;
    }
    if (!ax.contains("from") || !ax.contains("to") || !ax.contains("points"))
        throw ConfigError("config: " + where + " needs 'values' or from/to/points");
    const double from = as_number(ax["from"], where + ".from");
    const double to = as_number(ax["to"], where + ".to");
    const int points = as_int(ax["points"], where + ".points");
    if (points < 1) throw ConfigError("config: " + where + " needs points >= 1");
    std::string scale = "linear";
    if (ax.contains("scale")) {
        scale = ax["scale"].get<std::string>();
        if (scale != "linear" && scale != "log")
            throw ConfigError("config: " + where + " scale must be linear or log");
    }
    std::vector<double> out(static_cast<std::size_t>(points));
    if (points == 1) {
        out[0] = from;
        return out;
    }
    if (scale == "log") {
        if (!(from > 0.0) || !(to > 0.0))
            throw ConfigError("config: " + where + " log scale needs positive bounds");
        const double lf = std::log(from), lt = std::log(to);
        for (int k = 0; k < points; ++k)
            out[static_cast<std::size_t>(k)] =
                std::exp(lf + (lt - lf) * k / (points - 1.0));
    } else {
        for (int k = 0; k < points; ++k)
            out[static_cast<std::size_t>(k)] = from + (to - from) * k / (points - 1.0);
    }
    return out;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize(const std::string& text) {
    std::string out = text;
    for (char& c : out)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return out;
}

}  // namespace

std::string config_hash(const nlohmann::json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return j;
}

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j,
                   {"qubit", "rates_are_angular", "baths", "jbar", "n_qubits",
                    "initial_block_weights", "engine", "sweep", "detuned_pair"},
                   "the top level");
    RunConfig cfg;

    if (!j.contains("qubit") || !j["qubit"].is_object())
        throw ConfigError("config: need a 'qubit' object");
    reject_unknown(j["qubit"], {"frequency_ghz", "omega0_rad_s"}, "'qubit'");
    const bool has_freq = j["qubit"].contains("frequency_ghz");
    const bool has_omega = j["qubit"].contains("omega0_rad_s");
    if (has_freq == has_omega)
        throw ConfigError("config: qubit needs exactly one of frequency_ghz, omega0_rad_s");
    if (has_freq) {
        const double f = as_number(j["qubit"]["frequency_ghz"], "qubit.frequency_ghz");
        if (!(f > 0.0)) throw ConfigError("config: qubit frequency must be positive");
        cfg.units.omega0 = two_pi * f * 1e9;
    } else {
        const double w = as_number(j["qubit"]["omega0_rad_s"], "qubit.omega0_rad_s");
        if (!(w > 0.0)) throw ConfigError("config: qubit frequency must be positive");
        cfg.units.omega0 = w;
    }

    if (j.contains("rates_are_angular")) {
        if (!j["rates_are_angular"].is_boolean())
            throw ConfigError("config: rates_are_angular must be a boolean");
        cfg.rates_are_angular = j["rates_are_angular"].get<bool>();
    }

    if (!j.contains("baths") || !j["baths"].is_object())
        throw ConfigError("config: need a 'baths' object");
    reject_unknown(j["baths"], {"hot", "cold", "parasitic"}, "'baths'");
    if (!j["baths"].contains("hot") || !j["baths"].contains("cold"))
        throw ConfigError("config: baths must include 'hot' and 'cold'");
    cfg.hot = parse_bath(j["baths"]["hot"], BathRole::hot, cfg.units,
                         cfg.rates_are_angular, "hot");
    cfg.cold = parse_bath(j["baths"]["cold"], BathRole::cold, cfg.units,
                          cfg.rates_are_angular, "cold");
    if (j["baths"].contains("parasitic"))
        cfg.parasitic = parse_bath(j["baths"]["parasitic"], BathRole::parasitic, cfg.units,
                                   cfg.rates_are_angular, "parasitic");

    const bool has_jbar = j.contains("jbar");
    const bool has_n = j.contains("n_qubits");
    if (has_jbar == has_n)
        throw ConfigError("config: need exactly one of 'jbar' and 'n_qubits'");
    if (has_jbar) {
        cfg.twice_jbar = twice_jbar_from(as_number(j["jbar"], "jbar"), "jbar");
        if (cfg.parasitic)
            throw ConfigError(
                "config: a fixed-Jbar block cannot carry a parasitic channel; "
                "use n_qubits");
    } else {
        const int n = as_int(j["n_qubits"], "n_qubits");
        if (n < 1) throw ConfigError("config: n_qubits must be at least 1");
        cfg.n_qubits = n;
    }

    if (j.contains("initial_block_weights")) {
        const nlohmann::json& init = j["initial_block_weights"];
        reject_unknown(init, {"top", "degeneracy", "weights"}, "'initial_block_weights'");
        InitialBlockWeights w;
        const int modes = (init.contains("top") ? 1 : 0) +
                          (init.contains("degeneracy") ? 1 : 0) +
                          (init.contains("weights") ? 1 : 0);
        if (modes != 1)
            throw ConfigError("config: initial_block_weights needs exactly one of "
                              "top, degeneracy, weights");
        if (!cfg.n_qubits)
            throw ConfigError("config: initial_block_weights only applies with n_qubits");
        if (init.contains("top")) {
            w = InitialBlockWeights::top_block(*cfg.n_qubits);
        } else if (init.contains("degeneracy")) {
            w = InitialBlockWeights::degeneracy_weighted(enumerate_blocks(*cfg.n_qubits));
        } else {
            for (const auto& item : init["weights"].items()) {
                int twice_j = 0;
                try {
                    twice_j = std::stoi(item.key());
                } catch (const std::exception&) {
                    throw ConfigError("config: weight keys are 2J integers, got '" +
                                      item.key() + "'");
                }
                w.weight[twice_j] = as_number(item.value(), "initial weight " + item.key());
            }
        }
        cfg.init = std::move(w);
    }

    if (j.contains("engine")) {
        cfg.engine = j["engine"].get<std::string>();
        if (cfg.engine != "auto" && cfg.engine != "analytic" && cfg.engine != "rate" &&
            cfg.engine != "oracle")
            throw ConfigError("config: engine must be auto, analytic, rate, or oracle");
    }

    if (j.contains("detuned_pair")) {
        reject_unknown(j["detuned_pair"], {"omega2_over_omega1", "quality_factor"},
                       "'detuned_pair'");
        RunConfig::DetunedPair d;
        if (j["detuned_pair"].contains("omega2_over_omega1"))
            d.omega2_over_omega1 = as_number(j["detuned_pair"]["omega2_over_omega1"],
                                             "detuned_pair.omega2_over_omega1");
        if (j["detuned_pair"].contains("quality_factor"))
            d.quality_factor =
                as_number(j["detuned_pair"]["quality_factor"], "detuned_pair.quality_factor");
        if (!(d.omega2_over_omega1 > 0.0) || d.omega2_over_omega1 == 1.0)
            throw ConfigError("config: omega2_over_omega1 must be positive and not 1");
        if (d.quality_factor < 0.0)
            throw ConfigError("config: quality_factor must be nonnegative");
        cfg.detuned = d;
    }

    if (j.contains("sweep")) {
        if (!j["sweep"].is_array()) throw ConfigError("config: sweep must be an array");
        for (const auto& ax : j["sweep"]) {
            reject_unknown(ax, {"parameter", "values", "from", "to", "points", "scale"},
                           "a sweep axis");
            if (!ax.contains("parameter"))
                throw ConfigError("config: sweep axis needs a 'parameter'");
            SweepAxis axis;
            axis.parameter = ax["parameter"].get<std::string>();
            if (!known_parameter(axis.parameter))
                throw ConfigError("config: unknown sweep parameter '" + axis.parameter + "'");
            if (axis.parameter == "jbar" && !cfg.twice_jbar)
                throw ConfigError("config: sweeping jbar needs a jbar run");
            if (axis.parameter == "n_qubits" && !cfg.n_qubits)
                throw ConfigError("config: sweeping n_qubits needs an n_qubits run");
            if (axis.parameter.rfind("parasitic", 0) == 0 ||
                axis.parameter == "t0_over_tp") {
                if (!cfg.parasitic)
                    throw ConfigError("config: sweeping '" + axis.parameter +
                                      "' needs a parasitic bath");
            }
            axis.values = axis_values(ax, "sweep axis '" + axis.parameter + "'");
            cfg.sweep.push_back(std::move(axis));
        }
    }

    cfg.hash = config_hash(j);
    return cfg;
}

void apply_parameter(RunConfig& cfg, const std::string& parameter, double value) {
    const auto parasitic_ref = [&]() -> BathSpec& {
        if (!cfg.parasitic)
            throw ConfigError("config: no parasitic bath to apply '" + parameter + "'");
        return *cfg.parasitic;
    };
    const auto nonneg_mk = [&](double v) {
        if (v < 0.0) throw ConfigError("config: negative temperature in '" + parameter + "'");
        return v * 1e-3;
    };

    if (parameter == "jbar") {
        cfg.twice_jbar = twice_jbar_from(value, "jbar");
    } else if (parameter == "n_qubits") {
        const double r = std::round(value);
        if (std::abs(value - r) > 1e-9 || r < 1.0)
            throw ConfigError("config: n_qubits must be a positive integer");
        cfg.n_qubits = static_cast<int>(r);
    } else if (parameter == "t0_over_th") {
        cfg.hot.temperature = kelvin_from_ratio(value, cfg.units, parameter);
    } else if (parameter == "t0_over_tc") {
        cfg.cold.temperature = kelvin_from_ratio(value, cfg.units, parameter);
    } else if (parameter == "t0_over_tp") {
        parasitic_ref().temperature = kelvin_from_ratio(value, cfg.units, parameter);
    } else if (parameter == "hot.temperature_mk") {
        cfg.hot.temperature = nonneg_mk(value);
    } else if (parameter == "cold.temperature_mk") {
        cfg.cold.temperature = nonneg_mk(value);
    } else if (parameter == "parasitic.temperature_mk") {
        parasitic_ref().temperature = nonneg_mk(value);
    } else if (parameter == "hot.nu_ghz") {
        cfg.hot.temperature = kelvin_from_nu_ghz(value, parameter);
    } else if (parameter == "cold.nu_ghz") {
        cfg.cold.temperature = kelvin_from_nu_ghz(value, parameter);
    } else if (parameter == "parasitic.nu_ghz") {
        parasitic_ref().temperature = kelvin_from_nu_ghz(value, parameter);
    } else if (parameter == "hot.rate_ghz") {
        cfg.hot.rate = rate_from_ghz(value, cfg.rates_are_angular, parameter);
    } else if (parameter == "cold.rate_ghz") {
        cfg.cold.rate = rate_from_ghz(value, cfg.rates_are_angular, parameter);
    } else if (parameter == "parasitic.rate_ghz") {
        parasitic_ref().rate = rate_from_ghz(value, cfg.rates_are_angular, parameter);
    } else if (parameter == "hot.rate_over_omega0") {
        if (value < 0.0) throw ConfigError("config: negative rate");
        cfg.hot.rate = value * cfg.units.omega0;
    } else if (parameter == "cold.rate_over_omega0") {
        if (value < 0.0) throw ConfigError("config: negative rate");
        cfg.cold.rate = value * cfg.units.omega0;
    } else if (parameter == "parasitic.rate_over_omega0") {
        if (value < 0.0) throw ConfigError("config: negative rate");
        parasitic_ref().rate = value * cfg.units.omega0;
    } else {
        throw ConfigError("config: unknown sweep parameter '" + parameter + "'");
    }
}

EngineKind resolve_engine(const RunConfig& cfg) {
    if (cfg.engine == "analytic") return EngineKind::analytic;
    if (cfg.engine == "rate") return EngineKind::rate_equation;
    if (cfg.engine == "oracle") return EngineKind::full_oracle;
    if (cfg.parasitic && cfg.parasitic->rate > 0.0) return EngineKind::rate_equation;
    return EngineKind::analytic;
}

std::string engine_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::analytic: return "analytic";
        case EngineKind::rate_equation: return "rate_equation";
        case EngineKind::full_oracle: return "full_oracle";
    }
    return "unknown";
}

namespace {

std::vector<std::string> output_columns(const RunConfig& cfg) {
    const bool jmode = cfg.twice_jbar.has_value();
    std::vector<std::string> cols{"q_hot_natural", "q_cold_natural"};
    if (!jmode) {
        cols.push_back("q_parasitic_natural");
        cols.push_back("q_parasitic_residual_natural");
    }
    cols.push_back("q_hot_watts");
    cols.push_back("q_independent_natural");
    if (!jmode) {
        cols.push_back("q_independent_parasitic_natural");
        cols.push_back("q_fixed_subspace_natural");
    } else {
        cols.push_back("q_limit_low_natural");
        cols.push_back("q_limit_high_natural");
    }
    if (cfg.detuned) cols.push_back("q_detuned_pair_natural");
    cols.push_back("enhancement_vs_independent");
    cols.push_back("mean_jz");
    cols.push_back("mean_j2");
    if (!jmode) cols.push_back("mean_j2_normalized");
    cols.push_back("t0_over_tstar");
    cols.push_back("tstar_mk");
    cols.push_back("residual");
    if (!jmode) cols.push_back("conservation_defect");
    return cols;
}

std::vector<double> run_point(const RunConfig& cfg) {
    const NaturalUnits& units = cfg.units;
    const bool jmode = cfg.twice_jbar.has_value();
    const EngineKind engine = resolve_engine(cfg);

    SteadyDistribution dist;
    if (jmode) {
        const int tj = *cfg.twice_jbar;
        switch (engine) {
            case EngineKind::analytic:
                dist = analytic_fixed_subspace(tj, cfg.hot, cfg.cold, units);
                break;
            case EngineKind::rate_equation: {
                auto ledger = std::make_shared<const DickeLedger>(enumerate_blocks(tj));
                const RateGenerator gen =
                    build_generator(ledger, cfg.hot, cfg.cold, std::nullopt, units);
                dist = solve_steady(gen, InitialBlockWeights::top_block(tj));
                break;
            }
            case EngineKind::full_oracle:
                dist = full_space_oracle(tj, cfg.hot, cfg.cold, std::nullopt, units,
                                         InitialBlockWeights::top_block(tj));
                break;
        }
    } else {
        const int n = *cfg.n_qubits;
        switch (engine) {
            case EngineKind::analytic: {
                if (cfg.parasitic && cfg.parasitic->rate > 0.0)
                    throw ConfigError(
                        "config: the analytic engine cannot treat a parasitic channel");
                if (!cfg.init)
                    throw ConfigError(
                        "config: the analytic engine over n_qubits needs "
                        "initial_block_weights");
                auto ledger = std::make_shared<const DickeLedger>(enumerate_blocks(n));
                dist = analytic_block_mixture(ledger, *cfg.init, cfg.hot, cfg.cold, units);
                break;
            }
            case EngineKind::rate_equation: {
                auto ledger = std::make_shared<const DickeLedger>(enumerate_blocks(n));
                const RateGenerator gen =
                    build_generator(ledger, cfg.hot, cfg.cold, cfg.parasitic, units);
                dist = solve_steady(gen, gen.has_parasitic
                                             ? std::optional<InitialBlockWeights>{}
                                             : cfg.init);
                break;
            }
            case EngineKind::full_oracle:
                dist = full_space_oracle(n, cfg.hot, cfg.cold, cfg.parasitic, units,
                                         cfg.init);
                break;
        }
    }

    const std::optional<BathSpec> parasitic = jmode ? std::nullopt : cfg.parasitic;
    const HeatReport report = make_heat_report(dist, cfg.hot, cfg.cold, parasitic, units);
    const double natural = hbar * units.omega0 * cfg.hot.rate;
    const int n_equiv = jmode ? *cfg.twice_jbar : *cfg.n_qubits;
    const double q_ind = independent_baseline(n_equiv, cfg.hot, cfg.cold, units);
    const double tstar = effective_temperature(cfg.hot, cfg.cold, units);
    const double xs = tstar > 0.0 ? units.t0() / tstar
                                  : std::numeric_limits<double>::infinity();

    std::vector<double> out{report.q_hot / natural, report.q_cold / natural};
    if (!jmode) {
        out.push_back(report.q_parasitic / natural);
        out.push_back(report.q_parasitic_residual / natural);
    }
    out.push_back(report.q_hot);
    out.push_back(q_ind / natural);
    if (!jmode) {
        const double q_ind_par =
            parasitic ? independent_with_parasitic(n_equiv, cfg.hot, cfg.cold, *parasitic,
                                                   units)
                      : q_ind;
        out.push_back(q_ind_par / natural);
        const SteadyDistribution top =
            analytic_fixed_subspace(n_equiv, cfg.hot, cfg.cold, units);
        BathSpec h = cfg.hot;
        h.role = BathRole::hot;
        out.push_back(bath_current(top, h, units) / natural);
    } else {
        const LimitCurrents lim = limit_currents(*cfg.twice_jbar, cfg.hot, cfg.cold, units);
        out.push_back(lim.low_temperature / natural);
        out.push_back(lim.high_temperature / natural);
    }
    if (cfg.detuned) {
        const double q_det = detuned_two_qubit_current(
            units.omega0, cfg.detuned->omega2_over_omega1 * units.omega0, cfg.hot.rate,
            cfg.detuned->quality_factor, cfg.hot, cfg.cold, parasitic, nullptr);
        out.push_back(q_det / natural);
    }
    out.push_back(q_ind != 0.0 ? report.q_hot / q_ind : nan_value);
    out.push_back(report.mean_jz);
    out.push_back(report.mean_j2);
    if (!jmode) out.push_back(report.mean_j2_normalized);
    out.push_back(xs);
    out.push_back(tstar * 1e3);
    out.push_back(dist.residual);
    if (!jmode) out.push_back(report.conservation_defect);
    return out;
}

}  // namespace

SweepResult run_scenario(const RunConfig& cfg, int jobs) {
    SweepResult result;
    result.hash = cfg.hash;
    result.preset = cfg.preset;
    result.engine_label = engine_name(resolve_engine(cfg));

    for (const SweepAxis& axis : cfg.sweep) result.columns.push_back(axis.parameter);
    const std::vector<std::string> outs = output_columns(cfg);
    result.columns.insert(result.columns.end(), outs.begin(), outs.end());

    std::size_t total = 1;
    for (const SweepAxis& axis : cfg.sweep) total *= axis.values.size();
    result.rows.resize(total);

    const auto eval_row = [&](std::size_t flat) {
        SweepRow& row = result.rows[flat];
        RunConfig point = cfg;
        std::size_t rem = flat;
        std::vector<double> coords(cfg.sweep.size());
        for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
            const std::vector<double>& vals = cfg.sweep[a].values;
            coords[a] = vals[rem % vals.size()];
            rem /= vals.size();
        }
        row.values.assign(result.columns.size(), nan_value);
        for (std::size_t a = 0; a < coords.size(); ++a) row.values[a] = coords[a];
        try {
            for (std::size_t a = 0; a < coords.size(); ++a)
                apply_parameter(point, cfg.sweep[a].parameter, coords[a]);
            const std::vector<double> outs_v = run_point(point);
            std::copy(outs_v.begin(), outs_v.end(), row.values.begin() + coords.size());
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    };

    // row index = row-major over the axes, first axis slowest
    if (jobs <= 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) eval_row(i);
    } else {
        const std::size_t workers =
            std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w]() {
                for (std::size_t i = w; i < total; i += workers) eval_row(i);
            });
        for (std::thread& t : pool) t.join();
    }
    return result;
}

void emit_csv(const SweepResult& result, std::ostream& out) {
    out << "# heatvalve " << tool_version << "\n";
    out << "# config fnv1a: " << result.hash << "\n";
    if (!result.preset.empty()) out << "# preset: " << result.preset << "\n";
    out << "# engine: " << result.engine_label << "\n";
    out << "# q_*_natural = q / (hbar * omega0 * gamma_hot)\n";
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) out << ",";
        out << result.columns[c];
    }
    out << ",error\n";
    for (const SweepRow& row : result.rows) {
        for (std::size_t c = 0; c < row.values.size(); ++c) {
            if (c) out << ",";
            out << format_value(row.values[c]);
        }
        out << "," << sanitize(row.error) << "\n";
    }
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output: cannot open '" + path + "' for writing");
    emit_csv(result, out);
}

SweepResult parse_csv(std::istream& in) {
    SweepResult result;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string hash_tag = "# config fnv1a: ";
            const std::string engine_tag = "# engine: ";
            const std::string preset_tag = "# preset: ";
            if (line.rfind(hash_tag, 0) == 0) result.hash = line.substr(hash_tag.size());
            if (line.rfind(engine_tag, 0) == 0)
                result.engine_label = line.substr(engine_tag.size());
            if (line.rfind(preset_tag, 0) == 0)
                result.preset = line.substr(preset_tag.size());
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (!have_header) {
            if (fields.empty() || fields.back() != "error")
                throw ConfigError("csv: header must end with 'error'");
            result.columns.assign(fields.begin(), fields.end() - 1);
            have_header = true;
            continue;
        }
        if (fields.size() != result.columns.size() + 1)
            throw ConfigError("csv: row width does not match the header");
        SweepRow row;
        row.values.reserve(result.columns.size());
        for (std::size_t c = 0; c < result.columns.size(); ++c) {
            const std::string& f = fields[c];
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str())
                throw ConfigError("csv: bad number '" + f + "'");
            row.values.push_back(v);
        }
        row.error = fields.back();
        result.rows.push_back(std::move(row));
    }
    if (!have_header) throw ConfigError("csv: no header found");
    return result;
}

double convert_units(double value, const std::string& from, const std::string& to) {
    const auto to_kelvin = [&](double v, const std::string& unit) -> double {
        if (unit == "mk") return v * 1e-3;
        if (unit == "k") return v;
        if (unit == "ghz") return planck_h * v * 1e9 / boltzmann_kb;
        if (unit == "rad_s") return hbar * v / boltzmann_kb;
        throw ConfigError("convert: unknown unit '" + unit + "'");
    };
    const double kelvin = to_kelvin(value, from);
    if (to == "mk") return kelvin * 1e3;
    if (to == "k") return kelvin;
    if (to == "ghz") return kelvin * boltzmann_kb / (planck_h * 1e9);
    if (to == "rad_s") return kelvin * boltzmann_kb / hbar;
    throw ConfigError("convert: unknown unit '" + to + "'");
}

nlohmann::json preset_config(const std::string& name) {
    using nlohmann::json;
    const json natural_qubit = {{"frequency_ghz", 4.0}};
    const json table1_baths = {
        {"hot", {{"nu_ghz", 8.0}, {"rate_ghz", 1.0}}},
        {"cold", {{"nu_ghz", 2.0}, {"rate_ghz", 1.0}}},
        {"parasitic", {{"temperature_mk", 50.0}, {"rate_ghz", 0.01}}}};

    if (name == "fig1a") {
        return json{
            {"qubit", natural_qubit},
            {"baths",
             {{"hot", {{"t0_over_t", 1.0}, {"rate_over_omega0", 1.0}}},
              {"cold", {{"t0_over_t", 3.0}, {"rate_over_omega0", 1.0}}}}},
            {"jbar", 0.5},
            {"engine", "analytic"},
            {"sweep",
             {{{"parameter", "jbar"}, {"values", {0.5, 1.0, 2.0, 4.0, 8.0}}},
              {{"parameter", "t0_over_th"},
               {"from", 0.1},
               {"to", 10.0},
               {"points", 50},
               {"scale", "log"}}}}};
    }
    if (name == "fig1b") {
        json jbar_vals = json::array();
        for (int k = 1; k <= 16; ++k) jbar_vals.push_back(0.5 * k);
        return json{
            {"qubit", natural_qubit},
            {"baths",
             {{"hot", {{"t0_over_t", 3.0}, {"rate_over_omega0", 1.0}}},
              {"cold", {{"t0_over_t", 3.0}, {"rate_over_omega0", 1.0}}}}},
            {"jbar", 0.5},
            {"engine", "analytic"},
            {"sweep",
             {{{"parameter", "jbar"}, {"values", jbar_vals}},
              {{"parameter", "t0_over_th"}, {"values", {3.0, 1.0, 0.3, 0.1}}}}}};
    }
    if (name == "fig3a" || name == "fig3c") {
        const double t0_over_th = name == "fig3a" ? 1.0 : 1.0 / 3.0;
        return json{
            {"qubit", natural_qubit},
            {"baths",
             {{"hot", {{"t0_over_t", t0_over_th}, {"rate_over_omega0", 1.0}}},
              {"cold", {{"t0_over_t", 3.0}, {"rate_over_omega0", 1.0}}},
              {"parasitic", {{"t0_over_t", 1.0}, {"rate_over_omega0", 0.001}}}}},
            {"n_qubits", 2},
            {"sweep",
             {{{"parameter", "n_qubits"}, {"from", 1.0}, {"to", 10.0}, {"points", 10}},
              {{"parameter", "t0_over_tp"},
               {"from", 0.1},
               {"to", 10.0},
               {"points", 50},
               {"scale", "log"}}}}};
    }
    if (name == "fig2a") {
        return json{{"qubit", natural_qubit},
                    {"baths", table1_baths},
                    {"n_qubits", 2},
                    {"sweep",
                     {{{"parameter", "n_qubits"}, {"from", 1.0}, {"to", 10.0}, {"points", 10}},
                      {{"parameter", "parasitic.temperature_mk"},
                       {"values", {50.0, 100.0, 200.0, 300.0, 450.0}}}}}};
    }
    if (name == "fig2b") {
        return json{{"qubit", natural_qubit},
                    {"baths", table1_baths},
                    {"n_qubits", 2},
                    {"detuned_pair", {{"omega2_over_omega1", 0.5}, {"quality_factor", 20.0}}},
                    {"sweep",
                     {{{"parameter", "parasitic.temperature_mk"},
                       {"from", 50.0},
                       {"to", 500.0},
                       {"points", 46}}}}};
    }
    if (name == "table1-n2") {
        json temps = json::array();
        for (int t = 50; t <= 500; t += 50) temps.push_back(static_cast<double>(t));
        return json{{"qubit", natural_qubit},
                    {"baths", table1_baths},
                    {"n_qubits", 2},
                    {"detuned_pair", {{"omega2_over_omega1", 0.5}, {"quality_factor", 20.0}}},
                    {"sweep",
                     {{{"parameter", "parasitic.temperature_mk"}, {"values", temps}}}}};
    }
    throw ConfigError("preset: unknown name '" + name + "'; known: fig1a fig1b fig2a "
                      "fig2b fig3a fig3c table1-n2");
}

std::vector<std::string> preset_names() {
    return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3c", "table1-n2"};
}

double oracle_check(int n_qubits, int draws, unsigned seed, std::ostream& out) {
    if (n_qubits < 1 || n_qubits > oracle_qubit_cap)
        throw std::domain_error("oracle-check: n must be between 1 and " +
                                std::to_string(oracle_qubit_cap));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xdraw(0.3, 4.0);
    std::uniform_real_distribution<double> gdraw(0.5, 2.0);
    std::uniform_real_distribution<double> udraw(0.0, 1.0);

    NaturalUnits units{two_pi * 4e9};
    const double gamma_scale = two_pi * 1e9;
    double worst = 0.0;
    out << "# engine-vs-oracle deviations, N = " << n_qubits << "\n";
    out << "draw,gamma_p,max_dp,dq_hot,dq_cold,dq_parasitic\n";
    for (int d = 0; d < draws; ++d) {
        const double t0 = units.t0();
        BathSpec hot{t0 / xdraw(rng), gdraw(rng) * gamma_scale, BathRole::hot};
        BathSpec cold{t0 / xdraw(rng), gdraw(rng) * gamma_scale, BathRole::cold};
        if (hot.temperature < cold.temperature) std::swap(hot.temperature, cold.temperature);
        const double gp = d % 2 == 0 ? 0.0 : 1e-3 * gamma_scale;
        std::optional<BathSpec> parasitic;
        if (gp > 0.0)
            parasitic = BathSpec{t0 / xdraw(rng), gp, BathRole::parasitic};

        auto ledger = std::make_shared<const DickeLedger>(enumerate_blocks(n_qubits));
        std::optional<InitialBlockWeights> init;
        if (gp == 0.0) {
            InitialBlockWeights w;
            double total = 0.0;
            for (const DickeBlock& b : ledger->blocks) {
                const double u = 0.1 + udraw(rng);
                w.weight[b.twice_j] = u;
                total += u;
            }
            for (auto& [k, v] : w.weight) v /= total;
            init = std::move(w);
        }

        const RateGenerator gen = build_generator(ledger, hot, cold, parasitic, units);
        const SteadyDistribution fast = solve_steady(gen, init);
        const SteadyDistribution exact =
            full_space_oracle(n_qubits, hot, cold, parasitic, units, init);

        const double dp = (fast.p - exact.p).cwiseAbs().maxCoeff();
        const HeatReport a = make_heat_report(fast, hot, cold, parasitic, units);
        const HeatReport b = make_heat_report(exact, hot, cold, parasitic, units);
        const double scale = std::max(
            {std::abs(b.q_hot), std::abs(b.q_cold), std::abs(b.q_parasitic), 1e-300});
        const double dh = std::abs(a.q_hot - b.q_hot) / scale;
        const double dc = std::abs(a.q_cold - b.q_cold) / scale;
        const double dq = std::abs(a.q_parasitic - b.q_parasitic) / scale;
        worst = std::max({worst, dp, dh, dc, dq});
        out << d << "," << format_value(gp / gamma_scale) << "," << format_value(dp) << ","
            << format_value(dh) << "," << format_value(dc) << "," << format_value(dq)
            << "\n";
    }
    out << "# worst deviation: " << format_value(worst) << "\n";
    return worst;
}

}  // namespace dicke
