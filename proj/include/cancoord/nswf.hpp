#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/domain.hpp"
#include "cancoord/utility.hpp"

namespace cancoord {

// Two welfare values within this relative distance of each other count as
// tied, so tie-breaking stays robust to float noise.
inline constexpr double kWelfareRelTolerance = 1e-9;

/// Outcome of one Nash-social-welfare maximization over a candidate grid.
struct WelfareResult {
    double chosen_value = 0.0;
    double welfare = 0.0; // product of the per-CF utilities at chosen_value
    std::map<std::string, double> per_cf_utilities;
    double utility_spread = 0.0; // max - min utility at chosen_value
    std::size_t candidate_count = 0;

    friend bool operator==(const WelfareResult&, const WelfareResult&) = default;
};

/// One CF's utility table, labeled with its id for the result map.
struct CfUtility {
    std::string cf_id;
    UtilityTable table;
};

/// Nash social welfare: the product of the utilities. Computed in the log
/// domain (sum of logs, exponentiated) when every input is >= 1e-12, as the
/// direct product otherwise. Utilities must be nonnegative.
double nswf_value(const std::vector<double>& utilities);

/// Evaluates welfare at every candidate and picks the maximum. Candidates
/// whose welfare lies within kWelfareRelTolerance (relative) of the maximum
/// are tied; ties are broken by the smallest utility spread - the fairest
/// allocation - and any remainder by the smallest parameter value.
/// All tables must share the same parameter and grid; candidates must be
/// grid points.
WelfareResult nswf_optimize(const std::vector<CfUtility>& tables,
                            const std::vector<double>& candidates);

/// Intersection of the CFs' optimal-config-ranges restricted to grid points.
/// An empty intersection falls back to the full grid so the welfare product
/// arbitrates globally instead of deadlocking.
std::vector<double> candidate_set(const std::vector<OptimalConfigRange>& ranges,
                                  const ParameterGrid& grid);

void to_json(nlohmann::json& j, const WelfareResult& result);
void from_json(const nlohmann::json& j, WelfareResult& result);

} // namespace cancoord
