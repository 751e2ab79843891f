// test_harness.cpp — config parsing, presets, sweeps, CSV round trips.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dicke/errors.hpp"
#include "dicke/harness.hpp"

using namespace dicke;

namespace {

nlohmann::json minimal_config() {
    return nlohmann::json{
        {"qubit", {{"frequency_ghz", 4.0}}},
        {"baths",
         {{"hot", {{"nu_ghz", 8.0}, {"rate_ghz", 1.0}}},
          {"cold", {{"nu_ghz", 2.0}, {"rate_ghz", 1.0}}}}},
        {"n_qubits", 2},
        {"initial_block_weights", {{"top", true}}}};
}

}  // namespace

TEST_CASE("config parsing fills physical fields") {
    const RunConfig cfg = parse_config(minimal_config());
    CHECK(cfg.units.omega0 == doctest::Approx(two_pi * 4e9).epsilon(1e-15));
    // an 8 GHz bath is just twice T0
    CHECK(cfg.hot.temperature == doctest::Approx(2.0 * cfg.units.t0()).epsilon(1e-13));
    CHECK(cfg.cold.temperature == doctest::Approx(0.5 * cfg.units.t0()).epsilon(1e-13));
    // plain-frequency rates pick up the 2*pi
    CHECK(cfg.hot.rate == doctest::Approx(two_pi * 1e9).epsilon(1e-15));
    CHECK(cfg.n_qubits.has_value());
    CHECK(*cfg.n_qubits == 2);
    CHECK_FALSE(cfg.parasitic.has_value());
    CHECK(cfg.engine == "auto");
    CHECK(cfg.hash.size() == 16);

    nlohmann::json angular = minimal_config();
    angular["rates_are_angular"] = true;
    CHECK(parse_config(angular).hot.rate == doctest::Approx(1e9).epsilon(1e-15));
}

TEST_CASE("config rejections") {
    nlohmann::json two_temps = minimal_config();
    two_temps["baths"]["hot"]["temperature_mk"] = 100.0;
    CHECK_THROWS_AS(parse_config(two_temps), ConfigError);

    nlohmann::json no_rate = minimal_config();
    no_rate["baths"]["cold"].erase("rate_ghz");
    CHECK_THROWS_AS(parse_config(no_rate), ConfigError);

    nlohmann::json typo = minimal_config();
    typo["qbuit"] = nlohmann::json::object();
    CHECK_THROWS_AS(parse_config(typo), ConfigError);

    nlohmann::json bad_engine = minimal_config();
    bad_engine["engine"] = "magic";
    CHECK_THROWS_AS(parse_config(bad_engine), ConfigError);

    nlohmann::json both_sizes = minimal_config();
    both_sizes["jbar"] = 2.0;
    CHECK_THROWS_AS(parse_config(both_sizes), ConfigError);

    nlohmann::json jbar_par = minimal_config();
    jbar_par.erase("n_qubits");
    jbar_par.erase("initial_block_weights");
    jbar_par["jbar"] = 2.0;
    jbar_par["baths"]["parasitic"] = {{"temperature_mk", 50.0}, {"rate_ghz", 0.01}};
    CHECK_THROWS_AS(parse_config(jbar_par), ConfigError);

    nlohmann::json bad_jbar = minimal_config();
    bad_jbar.erase("n_qubits");
    bad_jbar["jbar"] = 0.7;
    CHECK_THROWS_AS(parse_config(bad_jbar), ConfigError);

    nlohmann::json par_sweep = minimal_config();
    par_sweep["sweep"] = {{{"parameter", "t0_over_tp"}, {"values", {1.0}}}};
    CHECK_THROWS_AS(parse_config(par_sweep), ConfigError);

    nlohmann::json unknown_param = minimal_config();
    unknown_param["sweep"] = {{{"parameter", "voltage"}, {"values", {1.0}}}};
    CHECK_THROWS_AS(parse_config(unknown_param), ConfigError);
}

TEST_CASE("unit conversions hit the published anchors") {
    CHECK(std::abs(convert_units(8.0, "ghz", "mk") - 384.0) <= 0.1);
    CHECK(std::abs(convert_units(1.04, "ghz", "mk") - 50.0) <= 1.0);
    CHECK(convert_units(1.0, "k", "mk") == doctest::Approx(1000.0).epsilon(1e-15));
    for (double v : {0.3, 1.0, 4.7, 55.0}) {
        CHECK(convert_units(convert_units(v, "ghz", "mk"), "mk", "ghz") ==
              doctest::Approx(v).epsilon(1e-12));
        CHECK(convert_units(convert_units(v, "ghz", "rad_s"), "rad_s", "ghz") ==
              doctest::Approx(v).epsilon(1e-12));
    }
    CHECK_THROWS_AS(convert_units(1.0, "ghz", "furlong"), ConfigError);
}

TEST_CASE("engine resolution") {
    RunConfig cfg = parse_config(minimal_config());
    CHECK(resolve_engine(cfg) == EngineKind::analytic);
    cfg.engine = "oracle";
    CHECK(resolve_engine(cfg) == EngineKind::full_oracle);

    nlohmann::json with_par = minimal_config();
    with_par["baths"]["parasitic"] = {{"temperature_mk", 50.0}, {"rate_ghz", 0.01}};
    CHECK(resolve_engine(parse_config(with_par)) == EngineKind::rate_equation);
    CHECK(engine_name(EngineKind::rate_equation) == "rate_equation");
}

TEST_CASE("apply_parameter touches the right knob") {
    RunConfig cfg = parse_config(minimal_config());
    apply_parameter(cfg, "t0_over_th", 4.0);
    CHECK(cfg.hot.temperature == doctest::Approx(cfg.units.t0() / 4.0).epsilon(1e-14));
    apply_parameter(cfg, "cold.temperature_mk", 96.0);
    CHECK(cfg.cold.temperature == doctest::Approx(0.096).epsilon(1e-14));
    apply_parameter(cfg, "n_qubits", 5.0);
    CHECK(*cfg.n_qubits == 5);
    CHECK_THROWS_AS(apply_parameter(cfg, "t0_over_tp", 1.0), ConfigError);
    CHECK_THROWS_AS(apply_parameter(cfg, "n_qubits", 2.5), ConfigError);
    CHECK_THROWS_AS(apply_parameter(cfg, "flux", 1.0), ConfigError);
}

TEST_CASE("preset catalogue") {
    CHECK(preset_names().size() == 7);
    for (const std::string& name : preset_names())
        CHECK_NOTHROW(parse_config(preset_config(name)));
    CHECK_THROWS_AS(preset_config("fig9z"), ConfigError);
}

TEST_CASE("fig1b preset sweeps Jbar against the hot bath") {
    RunConfig cfg = parse_config(preset_config("fig1b"));
    cfg.preset = "fig1b";
    const SweepResult result = run_scenario(cfg);
    REQUIRE(result.columns.size() >= 3);
    CHECK(result.columns[0] == "jbar");
    CHECK(result.columns[1] == "t0_over_th");
    bool has_q = false;
    for (const std::string& c : result.columns)
        if (c == "q_hot_natural") has_q = true;
    CHECK(has_q);
    CHECK(result.rows.size() == 16 * 4);
    for (const SweepRow& row : result.rows) CHECK(row.error.empty());
}

TEST_CASE("sweep output is deterministic byte for byte") {
    RunConfig cfg = parse_config(preset_config("fig2b"));
    cfg.preset = "fig2b";
    std::ostringstream a, b;
    emit_csv(run_scenario(cfg), a);
    emit_csv(run_scenario(cfg, 2), b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("nan") == std::string::npos);
}

TEST_CASE("csv round trip preserves every bit") {
    RunConfig cfg = parse_config(preset_config("table1-n2"));
    cfg.preset = "table1-n2";
    const SweepResult result = run_scenario(cfg);
    std::ostringstream out;
    emit_csv(result, out);

    std::istringstream in(out.str());
    const SweepResult back = parse_csv(in);
    CHECK(back.hash == result.hash);
    CHECK(back.preset == "table1-n2");
    REQUIRE(back.columns == result.columns);
    REQUIRE(back.rows.size() == result.rows.size());
    for (std::size_t r = 0; r < result.rows.size(); ++r)
        for (std::size_t c = 0; c < result.columns.size(); ++c)
            CHECK(back.rows[r].values[c] == result.rows[r].values[c]);
}

TEST_CASE("a failing grid point becomes an error row, not an abort") {
    nlohmann::json j = minimal_config();
    j["sweep"] = {{{"parameter", "t0_over_th"}, {"values", {1.0, -2.0, 3.0}}}};
    const SweepResult result = run_scenario(parse_config(j));
    REQUIRE(result.rows.size() == 3);
    CHECK(result.rows[0].error.empty());
    CHECK_FALSE(result.rows[1].error.empty());
    CHECK(result.rows[2].error.empty());
    // the bad row keeps its coordinate and pads outputs with nan
    CHECK(result.rows[1].values[0] == -2.0);
    CHECK(std::isnan(result.rows[1].values[1]));
}

TEST_CASE("config hash is stable under key order and sensitive to content") {
    nlohmann::json a = minimal_config();
    nlohmann::json b;
    b["initial_block_weights"] = {{"top", true}};
    b["n_qubits"] = 2;
    b["baths"] = {{"cold", {{"rate_ghz", 1.0}, {"nu_ghz", 2.0}}},
                  {"hot", {{"rate_ghz", 1.0}, {"nu_ghz", 8.0}}}};
    b["qubit"] = {{"frequency_ghz", 4.0}};
    CHECK(config_hash(a) == config_hash(b));
    b["n_qubits"] = 3;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("oracle check stays under tolerance on a smoke run") {
    std::ostringstream sink;
    CHECK(oracle_check(2, 2, 99, sink) <= 1e-8);
    CHECK(sink.str().find("worst deviation") != std::string::npos);
}
