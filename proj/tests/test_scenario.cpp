#include <doctest.h>

#include "cancoord/scenario.hpp"

using namespace cancoord;

namespace {

nlohmann::json minimal_scenario() {
    nlohmann::json spec;
    spec["name"] = "TXP";
    spec["unit"] = "dBm";
    spec["min"] = 50.0;
    spec["max"] = 80.0;
    spec["step"] = 1.0;

    nlohmann::json mlb;
    mlb["id"] = "MLB";
    mlb["objective_kpi"] = "load";
    mlb["minimizing"] = true;
    mlb["params_written"] = nlohmann::json::array({"TXP"});

    nlohmann::json cco;
    cco["id"] = "CCO";
    cco["objective_kpi"] = "coverage";
    cco["params_written"] = nlohmann::json::array({"TXP"});

    nlohmann::json j;
    j["parameters"] = nlohmann::json::array({spec});
    j["cfs"] = nlohmann::json::array({mlb, cco});
    j["env"] = {{"user_count", 40}, {"placements", 3}, {"seed", 5}};
    j["cycles"] = 2;
    j["preloaded_configuration"]["entries"]["TXP"] = 65.0;
    return j;
}

} // namespace

TEST_CASE("a minimal scenario parses with defaults applied") {
    const Scenario s = parse_scenario(minimal_scenario().dump(), "test.json");
    CHECK(s.parameters.size() == 1);
    REQUIRE(s.cfs.size() == 2);
    CHECK(s.cfs[0].minimizing);
    CHECK(s.cfs[0].threshold_pct == 5.0);
    CHECK(s.cfs[1].scale == UtilityScale{0, 1});
    CHECK(s.timeout_ticks == 10);
    CHECK(s.cycles == 2);
    CHECK(s.env.user_count == 40);
    CHECK(s.env.cells.size() == 5); // default center + corners
    CHECK_FALSE(s.env_shift.has_value());

    const auto grids = scenario_grids(s);
    CHECK(grids.at("TXP").size() == 31);
}

TEST_CASE("parse errors carry a line anchor") {
    const std::string broken = "{\n  \"parameters\": [\n  oops\n";
    try {
        parse_scenario(broken, "broken.json");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("broken.json:3") != std::string::npos);
    }
}

TEST_CASE("validation failures name the offending piece") {
    auto j = minimal_scenario();
    j["preloaded_configuration"]["entries"]["TXP"] = 65.4;
    CHECK_THROWS_AS(parse_scenario(j.dump(), "t.json"), ValidationError);

    j = minimal_scenario();
    j["cfs"][0]["params_written"] = nlohmann::json::array({"RET"});
    try {
        parse_scenario(j.dump(), "t.json");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("MLB") != std::string::npos);
        CHECK(std::string(e.what()).find("RET") != std::string::npos);
    }

    j = minimal_scenario();
    j["cfs"][1]["threshold_pct"] = 0.0;
    CHECK_THROWS_AS(parse_scenario(j.dump(), "t.json"), ValidationError);

    j = minimal_scenario();
    j["cycles"] = -1;
    CHECK_THROWS_AS(parse_scenario(j.dump(), "t.json"), ValidationError);

    j = minimal_scenario();
    j["env_shift"] = {{"at_cycle", 0}, {"path_loss_exponent", 3.0}};
    CHECK_THROWS_AS(parse_scenario(j.dump(), "t.json"), ValidationError);
}

TEST_CASE("env shifts override only the listed fields") {
    auto j = minimal_scenario();
    j["env_shift"] = {{"at_cycle", 2}, {"path_loss_exponent", 3.0}};
    const Scenario s = parse_scenario(j.dump(), "t.json");
    REQUIRE(s.env_shift.has_value());

    const EnvConfig shifted = apply_shift(s.env, *s.env_shift);
    CHECK(shifted.path_loss_exponent == 3.0);
    CHECK(shifted.user_count == s.env.user_count);
    CHECK(shifted.seed == s.env.seed);
    CHECK(shifted.cells == s.env.cells);
}

TEST_CASE("the raw text is preserved for hashing") {
    const std::string text = minimal_scenario().dump();
    CHECK(parse_scenario(text, "t.json").raw == text);
}
