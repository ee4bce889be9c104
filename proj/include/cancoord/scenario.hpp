#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/agent.hpp"
#include "cancoord/domain.hpp"
#include "cancoord/envsim.hpp"

namespace cancoord {

/// Environment change injected before a given cycle's data collection;
/// only the listed fields override the running EnvConfig.
struct EnvShift {
    long at_cycle = 0;
    nlohmann::json overrides = nlohmann::json::object();
};

/// A full run description: parameters, CFs, environment, schedule.
struct Scenario {
    std::vector<ParameterSpec> parameters;
    std::vector<CfConfig> cfs;
    EnvConfig env;
    long cycles = 0;
    Configuration preloaded;
    long timeout_ticks = 10;
    std::string output_dir = "out";
    std::optional<EnvShift> env_shift;
    std::string raw; // original file bytes, hashed into the run artifact
};

/// Parses and validates a scenario document. Throws ValidationError with a
/// line-anchored diagnostic on parse failure and a field-anchored one on
/// validation failure.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::string& origin);

/// Grids for every declared parameter, keyed by name.
std::map<std::string, ParameterGrid> scenario_grids(const Scenario& scenario);

/// EnvConfig with the shift's overrides applied.
EnvConfig apply_shift(const EnvConfig& env, const EnvShift& shift);

} // namespace cancoord
