#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"

#include "droplet/config.hpp"

using namespace droplet;

namespace {
bool throws_mentioning(const std::string& text, const std::string& needle) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}
} // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config fills the documented defaults") {
    RunConfig c = parse_config_text(R"({"potential":{"family":"gaussian"}})");
    CHECK(c.box == 4.0);
    CHECK(c.nodes == 512);
    CHECK(c.tau == 1.0);
    CHECK(c.N == 16);
    CHECK(c.steps == 2'000'000);
    CHECK(c.burn_in == -1);
    CHECK(c.seed == 1);
    CHECK(c.chains == 4);
    CHECK(c.restarts == 8);
    CHECK(c.mass_rel_tol == 1e-3);
    CHECK(c.psor_tol == 1e-9);
    CHECK(c.output_dir == ".");
}

TEST_CASE("all keys round-trip") {
    RunConfig c = parse_config_text(R"({
        "potential": {"family": "elbau_felder", "a": 0.5},
        "grid": {"box": 3.0, "nodes": 128},
        "tau": 2.0, "N": 8, "steps": 1000, "burn_in": 100,
        "seed": 9, "chains": 2, "restarts": 3,
        "tolerances": {"mass_rel_tol": 1e-4, "psor_tol": 1e-8},
        "output_dir": "out"
    })");
    CHECK(c.box == 3.0);
    CHECK(c.nodes == 128);
    CHECK(c.tau == 2.0);
    CHECK(c.N == 8);
    CHECK(c.steps == 1000);
    CHECK(c.burn_in == 100);
    CHECK(c.seed == 9);
    CHECK(c.chains == 2);
    CHECK(c.restarts == 3);
    CHECK(c.mass_rel_tol == 1e-4);
    CHECK(c.psor_tol == 1e-8);
    CHECK(c.output_dir == "out");
    CHECK(c.potential.phi({1.0, 0.0}) ==
          doctest::Approx(1.5)); // |z|^2 + a Re z^2 at z=1
}

TEST_CASE("invalid potential parameters surface as config errors") {
    // the family constructor requires |a| < 1
    CHECK(throws_mentioning(
        R"({"potential":{"family":"elbau_felder","a":1.5}})", "/potential"));
    CHECK(throws_mentioning(R"({"potential":{"family":"nope"}})",
                            "/potential/family"));
    CHECK(throws_mentioning(R"({"potential":{"family":"elbau_felder"}})",
                            "/potential/a"));
}

TEST_CASE("duplicate keys are rejected") {
    CHECK(throws_mentioning(R"({"tau": 1.0, "tau": 2.0})", "duplicate"));
    CHECK(throws_mentioning(
        R"({"grid": {"nodes": 64, "nodes": 128}})", "duplicate"));
}

TEST_CASE("unknown keys are rejected with their JSON path") {
    CHECK(throws_mentioning(R"({"taus": 1.0})", "/taus"));
    CHECK(throws_mentioning(R"({"grid": {"box": 2.0, "x": 1}})", "/grid/x"));
    CHECK(throws_mentioning(
        R"({"potential": {"family": "gaussian", "a": 0.1}})", "/potential/a"));
}

TEST_CASE("type mismatches name the offending path") {
    CHECK(throws_mentioning(R"({"tau": "one"})", "/tau"));
    CHECK(throws_mentioning(R"({"grid": 3})", "/grid"));
    CHECK(throws_mentioning(R"({"tolerances": {"psor_tol": []}})",
                            "/tolerances/psor_tol"));
    CHECK(throws_mentioning(R"([1, 2])", "/"));
    CHECK(throws_mentioning("{not json", "invalid JSON"));
}

TEST_CASE("bound violations") {
    CHECK(throws_mentioning(R"({"tau": -1.0})", "/tau"));
    CHECK(throws_mentioning(R"({"grid": {"nodes": 15}})", "/grid/nodes"));
    CHECK(throws_mentioning(R"({"grid": {"box": 0.0}})", "/grid/box"));
    CHECK(throws_mentioning(R"({"N": 0})", "/N"));
    CHECK(throws_mentioning(R"({"chains": 0})", "/chains"));
    CHECK(throws_mentioning(R"({"tolerances": {"psor_tol": 0.0}})",
                            "psor_tol"));
}

TEST_CASE("effective config is echoed to the output directory") {
    RunConfig c = parse_config_text(
        R"({"tau": 0.5, "output_dir": "test_config_out"})");
    echo_effective_config(c);
    std::ifstream in("test_config_out/effective_config.json");
    REQUIRE(bool(in));
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    // the echo must itself be a valid config that parses to the same values
    RunConfig back = parse_config_text(text);
    CHECK(back.tau == 0.5);
    CHECK(back.nodes == c.nodes);
    std::remove("test_config_out/effective_config.json");
    std::remove("test_config_out");
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(parse_config("no_such_file.json"), ConfigError);
}

} // TEST_SUITE
