// harness.hpp — run configuration, figure presets, the sweep driver, and
// deterministic CSV output.
#pragma once

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dicke/engines.hpp"
#include "dicke/observables.hpp"

namespace dicke {

inline constexpr const char* tool_version = "1.0.0";

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

struct RunConfig {
    NaturalUnits units{};
    BathSpec hot{};
    BathSpec cold{};
    std::optional<BathSpec> parasitic{};
    std::optional<int> n_qubits{};
    std::optional<int> twice_jbar{};
    std::string engine{"auto"};
    std::optional<InitialBlockWeights> init{};
    std::vector<SweepAxis> sweep{};
    bool rates_are_angular{false};

    struct DetunedPair {
        double omega2_over_omega1{0.5};
        double quality_factor{20.0};
    };
    std::optional<DetunedPair> detuned{};

    std::string preset{};
    std::string hash{};  // of the originating json, fnv-1a 64 as hex
};

// Throws ConfigError on anything malformed: missing qubit frequency, a bath
// with zero or two temperature entries, unknown engine or sweep parameter.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json load_config_file(const std::string& path);
std::string config_hash(const nlohmann::json& j);

nlohmann::json preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Engine actually used once "auto" is resolved against the config.
EngineKind resolve_engine(const RunConfig& cfg);
std::string engine_name(EngineKind kind);

void apply_parameter(RunConfig& cfg, const std::string& parameter, double value);

struct SweepRow {
    std::vector<double> values;
    std::string error;  // empty on success; failed points keep their row
};

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<SweepRow> rows;
    std::string hash;
    std::string engine_label;
    std::string preset;
};

SweepResult run_scenario(const RunConfig& cfg, int jobs = 1);

// '#'-prefixed provenance comments, then a header row, then %.17g data.
// Identical configs produce byte-identical files.
void emit_csv(const SweepResult& result, std::ostream& out);
void write_csv(const SweepResult& result, const std::string& path);
SweepResult parse_csv(std::istream& in);

// Frequency/temperature conversions between "ghz", "mk", "k", and "rad_s".
double convert_units(double value, const std::string& from, const std::string& to);

// Rate-vs-oracle comparison over random bath draws; returns the largest
// deviation seen across populations and currents.
double oracle_check(int n_qubits, int draws, unsigned seed, std::ostream& out);

}  // namespace dicke
