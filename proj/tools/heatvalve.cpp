// heatvalve.cpp — command line front end.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dicke/errors.hpp"
#include "dicke/harness.hpp"

namespace {

void apply_engine_flag(dicke::RunConfig& cfg, const std::string& flag) {
    if (flag.empty()) return;
    if (flag != "analytic" && flag != "rate" && flag != "oracle" && flag != "auto")
        throw dicke::ConfigError("engine must be auto, analytic, rate, or oracle");
    cfg.engine = flag;
}

void print_single(const dicke::SweepResult& result) {
    if (result.rows.empty()) return;
    const dicke::SweepRow& row = result.rows.front();
    for (std::size_t c = 0; c < result.columns.size(); ++c)
        std::printf("%-28s %.17g\n", result.columns[c].c_str(), row.values[c]);
    if (!row.error.empty()) std::printf("%-28s %s\n", "error", row.error.c_str());
}

int count_errors(const dicke::SweepResult& result) {
    int n = 0;
    for (const dicke::SweepRow& row : result.rows)
        if (!row.error.empty()) ++n;
    return n;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state heat transport through a collectively coupled qubit array"};
    app.require_subcommand(1);

    std::string config_path, out_path, engine_flag, preset_name;
    int jobs = 1;

    CLI::App* steady = app.add_subcommand("steady", "solve one operating point");
    steady->add_option("--config", config_path, "JSON run configuration")->required();
    steady->add_option("--engine", engine_flag, "engine override");
    steady->add_option("--out", out_path, "also write a one-row CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep to CSV");
    sweep->add_option("--config", config_path, "JSON run configuration")->required();
    sweep->add_option("--engine", engine_flag, "engine override");
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    CLI::App* preset = app.add_subcommand("preset", "run a built-in scenario");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--engine", engine_flag, "engine override");
    preset->add_option("--out", out_path, "output CSV path (default <name>.csv)");
    preset->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    int check_n = 3, check_draws = 4;
    unsigned check_seed = 7;
    CLI::App* check = app.add_subcommand("oracle-check",
                                         "compare the rate engine against the "
                                         "full-space solver on random draws");
    check->add_option("--n", check_n, "qubit count (small)");
    check->add_option("--draws", check_draws, "number of random draws");
    check->add_option("--seed", check_seed, "RNG seed");

    double conv_value = 0.0;
    std::string conv_from, conv_to;
    CLI::App* convert = app.add_subcommand("convert", "convert between ghz, mk, k, rad_s");
    convert->add_option("value", conv_value, "numeric value")->required();
    convert->add_option("from", conv_from, "source unit")->required();
    convert->add_option("to", conv_to, "target unit")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (steady->parsed()) {
            dicke::RunConfig cfg = dicke::parse_config(dicke::load_config_file(config_path));
            if (!cfg.sweep.empty())
                throw dicke::ConfigError(
                    "steady expects a config without a sweep; use the sweep command");
            apply_engine_flag(cfg, engine_flag);
            const dicke::SweepResult result = dicke::run_scenario(cfg, 1);
            print_single(result);
            if (!out_path.empty()) dicke::write_csv(result, out_path);
            if (count_errors(result) > 0) return 3;
            return 0;
        }
        if (sweep->parsed()) {
            dicke::RunConfig cfg = dicke::parse_config(dicke::load_config_file(config_path));
            apply_engine_flag(cfg, engine_flag);
            const dicke::SweepResult result = dicke::run_scenario(cfg, jobs);
            dicke::write_csv(result, out_path);
            std::printf("wrote %zu rows (%d with errors) to %s\n", result.rows.size(),
                        count_errors(result), out_path.c_str());
            return 0;
        }
        if (preset->parsed()) {
            const nlohmann::json j = dicke::preset_config(preset_name);
            dicke::RunConfig cfg = dicke::parse_config(j);
            cfg.preset = preset_name;
            apply_engine_flag(cfg, engine_flag);
            if (out_path.empty()) out_path = preset_name + ".csv";
            const dicke::SweepResult result = dicke::run_scenario(cfg, jobs);
            dicke::write_csv(result, out_path);
            std::printf("wrote %zu rows (%d with errors) to %s\n", result.rows.size(),
                        count_errors(result), out_path.c_str());
            return 0;
        }
        if (check->parsed()) {
            const double worst =
                dicke::oracle_check(check_n, check_draws, check_seed, std::cout);
            if (worst > 1e-8)
                throw dicke::SolverError("oracle-check: worst deviation " +
                                         std::to_string(worst) + " exceeds 1e-8");
            return 0;
        }
        if (convert->parsed()) {
            const double v = dicke::convert_units(conv_value, conv_from, conv_to);
            std::printf("%.10g %s\n", v, conv_to.c_str());
            return 0;
        }
    } catch (const dicke::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const dicke::SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::length_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
