#include "doctest.h"

#include "latspec/config.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using namespace latspec;

TEST_SUITE("config") {

TEST_CASE("defaults validate and hash deterministically") {
    const RunConfig cfg = RunConfig::defaults();
    CHECK_NOTHROW(cfg.validate());
    const std::string h = cfg.hash();
    CHECK(h.size() == 18);
    CHECK(h.substr(0, 2) == "0x");
    CHECK(h == RunConfig::defaults().hash());
    CHECK(cfg.canonical_json() == RunConfig::defaults().canonical_json());
    CHECK(cfg.sweeps.k_list.size() == 9);
    CHECK(cfg.sweeps.rho_list.size() == 13);
}

TEST_CASE("partial overrides merge over the defaults") {
    const RunConfig cfg = RunConfig::from_json_text(R"({"grid": {"n": 8}})");
    CHECK(cfg.grid.n == 8);
    CHECK(cfg.grid.tiny_n == RunConfig::defaults().grid.tiny_n);
    CHECK(cfg.model.l_max == RunConfig::defaults().model.l_max);
    CHECK(cfg.hash() != RunConfig::defaults().hash());

    const RunConfig cfg2 = RunConfig::from_json_text(
        R"({"potential": {"type": "nearest_neighbor", "a": 3.0, "b": 0.25,
            "calibrate": false, "mu": 2.0}})");
    CHECK(cfg2.potential.type == "nearest_neighbor");
    CHECK(cfg2.potential.mu == 2.0);
    CHECK_FALSE(cfg2.potential.calibrate);
    const LatticePotential pot = cfg2.potential.shape();
    CHECK(pot.max_support() == 1);
    CHECK(pot.effective_coefficient({0, 0, 0}) == doctest::Approx(3.0));
}

TEST_CASE("unknown keys and wrong types are rejected with a field path") {
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"m": 3}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grdi": {}})"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"n": "twelve"}})"),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"(not json at all)"), ConfigError);
    try {
        RunConfig::from_json_text(R"({"grid": {"m": 3}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.field()).find("grid") != std::string::npos);
    }
}

TEST_CASE("cross-field validation catches inconsistent settings") {
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"tiny_n": 5}})").validate(),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"grid": {"n": 16, "cap": 8}})").validate(),
                    ConfigError);
    CHECK_THROWS_AS(
        RunConfig::from_json_text(R"({"model": {"x_spacing": 0.2}})").validate(),
        ConfigError);
    CHECK_THROWS_AS(
        RunConfig::from_json_text(R"({"sweeps": {"rho_list": [1e-6, 1e-4]}})").validate(),
        ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"sweeps": {"k_list": []}})").validate(),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json_text(R"({"potential": {"type": "yukawa"}})")
                        .potential.shape(),
                    ConfigError);
}

TEST_CASE("canonical JSON round-trips through the parser") {
    const RunConfig cfg = RunConfig::from_json_text(
        R"({"grid": {"n": 12}, "sweeps": {"z_list": [0.25, 1.5]}})");
    const RunConfig again = RunConfig::from_json_text(cfg.canonical_json());
    CHECK(again.hash() == cfg.hash());
    CHECK(again.grid.n == 12);
    REQUIRE(again.sweeps.z_list.size() == 2);
    CHECK(again.sweeps.z_list[1] == 1.5);
}

TEST_CASE("from_file loads what from_json_text parses") {
    const std::string path = "test_config_tmp.json";
    {
        std::ofstream out(path);
        out << R"({"output": {"dir": "elsewhere"}, "grid": {"eval_n": 4}})";
    }
    const RunConfig cfg = RunConfig::from_file(path);
    CHECK(cfg.output.dir == "elsewhere");
    CHECK(cfg.grid.eval_n == 4);
    std::remove(path.c_str());
    CHECK_THROWS_AS(RunConfig::from_file("definitely_missing_file.json"), ConfigError);
}

} // TEST_SUITE("config")
