#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/domain.hpp"

namespace cancoord {

/// Common scale every CF maps its objective onto so the controller can
/// compare outputs of different dimensions.
struct UtilityScale {
    double lo = 0.0;
    double hi = 1.0;

    friend bool operator==(const UtilityScale&, const UtilityScale&) = default;
};

/// A CF's normalized utility sampled on a parameter grid. This tabulated
/// form is also the on-wire encoding of the utility function.
struct UtilityTable {
    std::string parameter;
    std::vector<double> grid;
    std::vector<double> utilities;

    friend bool operator==(const UtilityTable&, const UtilityTable&) = default;
};

/// Parameter interval within which a CF's objective stays within
/// threshold_pct percent of its maximum.
struct OptimalConfigRange {
    std::string parameter;
    double min_value = 0.0;
    double max_value = 0.0;
    double threshold_pct = 5.0;

    friend bool operator==(const OptimalConfigRange&, const OptimalConfigRange&) = default;
};

void validate(const UtilityScale& scale);
void validate(const UtilityTable& table);

/// Linear map of raw objective values onto [scale.lo, scale.hi]:
/// u = lo + (v / maxv) * (hi - lo). The argmax sample maps exactly to hi.
/// Requires nonnegative objectives; throws DegenerateObjectiveError when
/// the maximum observed value is not positive.
UtilityTable normalize_linear(const std::string& parameter, std::vector<KpiSample> raw,
                              const UtilityScale& scale = {});

/// Turns a minimizing objective into a maximizing one: v -> maxv - v,
/// so the lowest raw value yields the highest transformed value.
std::vector<KpiSample> invert_for_minimization(std::vector<KpiSample> raw);

/// Leftmost index of the maximum utility.
std::size_t argmax_index(const UtilityTable& table);

/// [min, max] of the maximal contiguous run of grid points, containing the
/// argmax, whose utility stays >= max_utility * (1 - threshold_pct / 100).
OptimalConfigRange optimal_config_range(const UtilityTable& table, double threshold_pct);

/// Exact endpoint comparison; both ranges must describe the same parameter.
bool ranges_identical(const OptimalConfigRange& a, const OptimalConfigRange& b);

void to_json(nlohmann::json& j, const UtilityScale& scale);
void from_json(const nlohmann::json& j, UtilityScale& scale);
void to_json(nlohmann::json& j, const UtilityTable& table);
void from_json(const nlohmann::json& j, UtilityTable& table);
void to_json(nlohmann::json& j, const OptimalConfigRange& range);
void from_json(const nlohmann::json& j, OptimalConfigRange& range);

} // namespace cancoord
