#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/domain.hpp"

namespace cancoord {

// KPI names produced by the synthetic environment.
inline constexpr const char* kLoadKpi = "load";
inline constexpr const char* kCoverageKpi = "coverage";

/// Desk-scale synthetic radio environment: a square area with one center
/// cell under test plus fixed-power neighbor cells, log-distance path loss,
/// and users placed uniformly at random per placement seed.
struct EnvConfig {
    double area = 2000.0; // square side length, meters
    std::vector<std::array<double, 2>> cells; // [0] is the center cell under test
    int user_count = 100;
    int placements = 20;
    std::uint64_t seed = 1;
    double path_loss_exponent = 3.5;
    double ref_loss_db = 30.0; // path loss at 1 m
    double neighbor_txp_dbm = 65.0;
    double coverage_threshold_dbm = -65.0;

    friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// One placement evaluated at one center-cell TXP.
struct ScenarioSnapshot {
    std::vector<std::array<double, 2>> users;
    std::vector<int> serving_cell; // argmax RSRP, lowest cell index on ties
    std::vector<double> best_rsrp; // dBm
};

struct KpiPoint {
    double load = 0.0;     // users served by the center cell
    double coverage = 0.0; // fraction of users whose best RSRP clears the threshold
};

void validate(const EnvConfig& env);

/// Center + four corner cells for the configured area.
std::vector<std::array<double, 2>> default_cells(double area);

/// Seed for the i-th user placement, derived from the environment seed.
std::uint64_t placement_seed(const EnvConfig& env, int placement_index);

ScenarioSnapshot snapshot(const EnvConfig& env, double txp_center_dbm,
                          std::uint64_t placement_seed);

/// load and coverage of one placement at one center-cell TXP.
/// Fully deterministic given (env, placement_seed).
KpiPoint evaluate_kpis(const EnvConfig& env, double txp_center_dbm,
                       std::uint64_t placement_seed);

/// Training data: every placement evaluated at every grid TXP. Returns
/// samples keyed by KPI name ("load", "coverage"), placements * |grid|
/// samples per KPI, in (placement, grid) order.
std::map<std::string, std::vector<KpiSample>> generate_dataset(const EnvConfig& env,
                                                               const ParameterGrid& grid);

/// Dataset dump, one row per (kpi, placement, txp):
/// kpi,txp,value,placement_seed
void write_dataset_csv(const EnvConfig& env, const ParameterGrid& grid,
                       const std::string& path);

void to_json(nlohmann::json& j, const EnvConfig& env);
void from_json(const nlohmann::json& j, EnvConfig& env);

} // namespace cancoord
