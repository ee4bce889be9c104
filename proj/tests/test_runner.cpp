#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cancoord/persistence.hpp"
#include "cancoord/runner.hpp"

using namespace cancoord;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "cancoord_runner" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Scenario reference_scenario() {
    return load_scenario(REFERENCE_SCENARIO_PATH);
}

// Small and fast variant of the reference setup.
Scenario small_scenario(long cycles) {
    Scenario s = reference_scenario();
    s.cycles = cycles;
    s.env.user_count = 40;
    s.env.placements = 4;
    return s;
}

std::size_t count_kind(const std::filesystem::path& events_path, const std::string& kind) {
    std::ifstream in(events_path);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
        if (!line.empty() && nlohmann::json::parse(line).at("kind") == kind)
            ++n;
    return n;
}

} // namespace

TEST_CASE("zero cycles leave the preloaded configuration untouched") {
    Scenario s = small_scenario(0);
    s.env_shift.reset();
    const auto dir = fresh_dir("zero_cycles");
    const RunOutputs outputs = run_scenario(s, dir);

    CHECK(outputs.final_config == s.preloaded);
    CHECK_FALSE(outputs.final_welfare.has_value());

    // nothing in the log beyond bootstrap: preload + registrations
    std::ifstream in(outputs.events_path);
    std::string line;
    std::size_t events = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto kind = nlohmann::json::parse(line).at("kind").get<std::string>();
        const bool bootstrap =
            kind == event_kind::config_preloaded || kind == event_kind::cf_registered;
        CHECK(bootstrap);
        ++events;
    }
    CHECK(events == 1 + s.cfs.size());

    // utilities.csv still reflects the trained CFs
    const std::string csv = slurp(outputs.utilities_csv_path);
    CHECK(csv.rfind("parameter_value,MLB,CCO,nswf_product", 0) == 0);
}

TEST_CASE("the reference run completes the coordination workflow") {
    const auto dir = fresh_dir("reference");
    const RunOutputs outputs = run_scenario(small_scenario(2), dir);

    REQUIRE(outputs.final_welfare.has_value());
    const double chosen = outputs.final_config.entries.at("TXP");
    CHECK(chosen == outputs.final_welfare->chosen_value);

    // every detected shift yields one fully collected transaction
    const std::size_t updates = count_kind(outputs.events_path, event_kind::config_update);
    CHECK(updates >= 1);
    CHECK(count_kind(outputs.events_path, event_kind::info_request_sent) == 2 * updates);
    CHECK(count_kind(outputs.events_path, event_kind::info_response) == 2 * updates);
    CHECK(count_kind(outputs.events_path, event_kind::transaction_aborted) == 0);

    // result.json mirrors the final state
    const nlohmann::json result = nlohmann::json::parse(slurp(outputs.result_path));
    CHECK(result.at("final_configuration").get<Configuration>() == outputs.final_config);
    CHECK(result.at("conflict").at("edges").size() == 1);
    CHECK(result.at("conflict").at("edges")[0].at("kind") == "Configuration");
    CHECK(result.at("conflict").at("groups").size() == 1);
}

TEST_CASE("the utilities csv product column is the row-wise nswf value") {
    const auto dir = fresh_dir("csv_crosscheck");
    const RunOutputs outputs = run_scenario(small_scenario(1), dir);

    std::ifstream in(outputs.utilities_csv_path);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "parameter_value,MLB,CCO,nswf_product");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(cells, cell, ','))
            values.push_back(std::stod(cell));
        REQUIRE(values.size() == 4);
        CHECK(nswf_value({values[1], values[2]}) ==
              doctest::Approx(values[3]).epsilon(1e-9));
        ++rows;
    }
    CHECK(rows == 31);
}

TEST_CASE("identical seeds reproduce byte-identical artifacts") {
    const auto dir_a = fresh_dir("determinism_a");
    const auto dir_b = fresh_dir("determinism_b");
    const Scenario s = small_scenario(2);
    run_scenario(s, dir_a);
    run_scenario(s, dir_b);
    CHECK(slurp(dir_a / "events.jsonl") == slurp(dir_b / "events.jsonl"));
    CHECK(slurp(dir_a / "result.json") == slurp(dir_b / "result.json"));
    CHECK(slurp(dir_a / "utilities.csv") == slurp(dir_b / "utilities.csv"));

    // a different seed produces a different environment
    const auto dir_c = fresh_dir("determinism_c");
    run_scenario(s, dir_c, 987654321);
    CHECK(slurp(dir_a / "utilities.csv") != slurp(dir_c / "utilities.csv"));
}

TEST_CASE("replaying the event log reproduces the final configuration") {
    const auto dir = fresh_dir("replay");
    const RunOutputs outputs = run_scenario(small_scenario(2), dir);
    const ControllerSnapshot replayed = replay(outputs.events_path);
    CHECK(replayed.config == outputs.final_config);
    CHECK(replayed.cf_ids == std::set<std::string>{"CCO", "MLB"});
}

TEST_CASE("the run artifact ties outputs to the scenario content") {
    const auto dir = fresh_dir("artifact");
    const Scenario s = small_scenario(1);
    const RunOutputs outputs = run_scenario(s, dir);
    const RunArtifact artifact = read_artifact(outputs.artifact_path);
    CHECK(artifact.scenario_hash == content_hash_hex(s.raw));
    CHECK(artifact.seed == s.env.seed);
    CHECK(artifact.events_path == outputs.events_path.string());
}

TEST_CASE("classify reports the reference conflict") {
    const nlohmann::json report = classify_report(reference_scenario());
    REQUIRE(report.at("edges").size() == 1);
    CHECK(report.at("edges")[0].at("cf_a") == "CCO");
    CHECK(report.at("edges")[0].at("cf_b") == "MLB");
    CHECK(report.at("edges")[0].at("kind") == "Configuration");
    CHECK(report.at("edges")[0].at("subject") == "TXP");
    CHECK(report.at("groups") == nlohmann::json::array({{"CCO", "MLB"}}));

    const std::string table = classify_table(report);
    CHECK(table.find("Configuration") != std::string::npos);
    CHECK(table.find("TXP") != std::string::npos);
}

TEST_CASE("a lone writer optimizes to its own argmax") {
    Scenario s = small_scenario(2); // keeps the scenario's tuned env shift
    s.cfs.erase(s.cfs.begin());     // drop MLB, keep CCO
    const auto dir = fresh_dir("single_cf");
    const RunOutputs outputs = run_scenario(s, dir);
    REQUIRE(outputs.final_welfare.has_value());
    CHECK(outputs.final_welfare->per_cf_utilities.size() == 1);
    CHECK(outputs.final_welfare->per_cf_utilities.at("CCO") == 1.0);
}
