#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/errors.hpp"

namespace cancoord {

// Tolerance for "this value sits on a grid point" checks.
inline constexpr double kGridTolerance = 1e-9;

/// A tunable control parameter discretized to a uniform axis.
struct ParameterSpec {
    std::string name;
    std::string unit;
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    friend bool operator==(const ParameterSpec&, const ParameterSpec&) = default;
};

/// The fully materialized axis of a ParameterSpec. values[0] == min,
/// values.back() == max, consecutive difference == step.
struct ParameterGrid {
    ParameterSpec spec;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double front() const { return values.front(); }
    double back() const { return values.back(); }

    friend bool operator==(const ParameterGrid&, const ParameterGrid&) = default;
};

/// Assignment of values to named control parameters.
struct Configuration {
    std::map<std::string, double> entries;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// One observation: objective value measured at a parameter setting.
struct KpiSample {
    double parameter_value = 0.0;
    double objective_value = 0.0;

    friend bool operator==(const KpiSample&, const KpiSample&) = default;
};

/// Static identity of a cognitive function: what it optimizes, what it
/// writes, what it influences, and which peers it declares dependencies on.
struct CfDescriptor {
    std::string cf_id;
    std::string objective_kpi;
    std::set<std::string> params_written;
    std::set<std::string> kpis_influenced;
    std::set<std::string> depends_on;

    friend bool operator==(const CfDescriptor&, const CfDescriptor&) = default;
};

void validate(const ParameterSpec& spec);
void validate(const CfDescriptor& descriptor);

/// Materializes the discretized axis. Throws ValidationError when the step
/// does not land exactly on max (within kGridTolerance of a whole count).
ParameterGrid build_grid(const ParameterSpec& spec);

/// Nearest grid value; exact midpoints round toward the lower grid point.
/// Throws OutOfRangeError for v outside [min - step/2, max + step/2].
double snap_to_grid(const ParameterGrid& grid, double v);

/// True when v lies within kGridTolerance of a grid point.
bool on_grid(const ParameterGrid& grid, double v);

/// Index of the grid point matching v within kGridTolerance.
/// Throws ValidationError when v is not a grid point.
std::size_t grid_index(const ParameterGrid& grid, double v);

/// Every entry must name a known parameter and sit on its grid.
void validate_configuration(const Configuration& config,
                            const std::map<std::string, ParameterGrid>& grids);

void to_json(nlohmann::json& j, const ParameterSpec& spec);
void from_json(const nlohmann::json& j, ParameterSpec& spec);
void to_json(nlohmann::json& j, const ParameterGrid& grid);
void from_json(const nlohmann::json& j, ParameterGrid& grid);
void to_json(nlohmann::json& j, const Configuration& config);
void from_json(const nlohmann::json& j, Configuration& config);
void to_json(nlohmann::json& j, const KpiSample& sample);
void from_json(const nlohmann::json& j, KpiSample& sample);
void to_json(nlohmann::json& j, const CfDescriptor& descriptor);
void from_json(const nlohmann::json& j, CfDescriptor& descriptor);

} // namespace cancoord
