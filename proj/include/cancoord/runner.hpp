#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cancoord/controller.hpp"
#include "cancoord/scenario.hpp"

namespace cancoord {

/// Everything a completed scenario run leaves behind.
struct RunOutputs {
    std::filesystem::path events_path;
    std::filesystem::path utilities_csv_path;
    std::filesystem::path result_path;
    std::filesystem::path artifact_path;
    Configuration final_config;
    std::optional<WelfareResult> final_welfare;
    long final_tick = 0;
};

/// Drives the deterministic in-process run: initial training, then
/// `cycles` learning cycles with the full request/collect/apply workflow
/// between the CFs and the controller. Writes events.jsonl, utilities.csv,
/// result.json and run.json into out_dir.
RunOutputs run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

/// Conflict edges and groups of a scenario as a JSON document.
nlohmann::json classify_report(const Scenario& scenario);

/// Human-readable table form of classify_report.
std::string classify_table(const nlohmann::json& report);

} // namespace cancoord
