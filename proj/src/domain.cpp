#include "cancoord/domain.hpp"

#include <algorithm>
#include <cmath>

namespace cancoord {

void validate(const ParameterSpec& spec) {
    if (spec.name.empty())
        throw ValidationError("parameter spec: name must not be empty");
    if (!(spec.min < spec.max))
        throw ValidationError("parameter spec '" + spec.name + "': min must be < max");
    if (!(spec.step > 0.0))
        throw ValidationError("parameter spec '" + spec.name + "': step must be > 0");
    const double count = (spec.max - spec.min) / spec.step;
    const double rounded = std::round(count);
    if (std::abs(count - rounded) > kGridTolerance)
        throw ValidationError("parameter spec '" + spec.name +
                              "': step does not divide the [min, max] span");
    if (rounded < 1.0)
        throw ValidationError("parameter spec '" + spec.name + "': grid needs at least 2 points");
}

void validate(const CfDescriptor& descriptor) {
    if (descriptor.cf_id.empty())
        throw ValidationError("cf descriptor: cf_id must not be empty");
    if (descriptor.params_written.empty())
        throw ValidationError("cf descriptor '" + descriptor.cf_id +
                              "': params_written must not be empty");
}

ParameterGrid build_grid(const ParameterSpec& spec) {
    validate(spec);
    const auto steps = static_cast<std::size_t>(std::llround((spec.max - spec.min) / spec.step));
    ParameterGrid grid{spec, {}};
    grid.values.reserve(steps + 1);
    for (std::size_t i = 0; i < steps; ++i)
        grid.values.push_back(spec.min + static_cast<double>(i) * spec.step);
    grid.values.push_back(spec.max); // pin the endpoint exactly
    return grid;
}

double snap_to_grid(const ParameterGrid& grid, double v) {
    const std::size_t n = grid.values.size();
    const double t = (v - grid.values.front()) / grid.spec.step;
    const double last = static_cast<double>(n - 1);
    if (t < -0.5 - kGridTolerance || t > last + 0.5 + kGridTolerance)
        throw OutOfRangeError("value " + std::to_string(v) + " outside snappable span of '" +
                              grid.spec.name + "'");
    // ceil(t - 0.5) rounds half-down, so exact midpoints pick the lower point.
    double k = std::ceil(t - 0.5);
    k = std::clamp(k, 0.0, last);
    return grid.values[static_cast<std::size_t>(k)];
}

bool on_grid(const ParameterGrid& grid, double v) {
    auto it = std::lower_bound(grid.values.begin(), grid.values.end(), v - kGridTolerance);
    return it != grid.values.end() && std::abs(*it - v) <= kGridTolerance;
}

std::size_t grid_index(const ParameterGrid& grid, double v) {
    auto it = std::lower_bound(grid.values.begin(), grid.values.end(), v - kGridTolerance);
    if (it == grid.values.end() || std::abs(*it - v) > kGridTolerance)
        throw ValidationError("value " + std::to_string(v) + " is not a grid point of '" +
                              grid.spec.name + "'");
    return static_cast<std::size_t>(it - grid.values.begin());
}

void validate_configuration(const Configuration& config,
                            const std::map<std::string, ParameterGrid>& grids) {
    for (const auto& [name, value] : config.entries) {
        auto it = grids.find(name);
        if (it == grids.end())
            throw ValidationError("configuration names unknown parameter '" + name + "'");
        if (!on_grid(it->second, value))
            throw ValidationError("configuration value for '" + name + "' is off-grid");
    }
}

void to_json(nlohmann::json& j, const ParameterSpec& spec) {
    j = {{"name", spec.name},
         {"unit", spec.unit},
         {"min", spec.min},
         {"max", spec.max},
         {"step", spec.step}};
}

void from_json(const nlohmann::json& j, ParameterSpec& spec) {
    j.at("name").get_to(spec.name);
    j.at("unit").get_to(spec.unit);
    j.at("min").get_to(spec.min);
    j.at("max").get_to(spec.max);
    j.at("step").get_to(spec.step);
}

void to_json(nlohmann::json& j, const ParameterGrid& grid) {
    j = {{"spec", grid.spec}, {"values", grid.values}};
}

void from_json(const nlohmann::json& j, ParameterGrid& grid) {
    j.at("spec").get_to(grid.spec);
    j.at("values").get_to(grid.values);
}

void to_json(nlohmann::json& j, const Configuration& config) {
    j = {{"entries", config.entries}};
}

void from_json(const nlohmann::json& j, Configuration& config) {
    j.at("entries").get_to(config.entries);
}

void to_json(nlohmann::json& j, const KpiSample& sample) {
    j = {{"parameter_value", sample.parameter_value}, {"objective_value", sample.objective_value}};
}

void from_json(const nlohmann::json& j, KpiSample& sample) {
    j.at("parameter_value").get_to(sample.parameter_value);
    j.at("objective_value").get_to(sample.objective_value);
}

void to_json(nlohmann::json& j, const CfDescriptor& descriptor) {
    j = {{"cf_id", descriptor.cf_id},
         {"objective_kpi", descriptor.objective_kpi},
         {"params_written", descriptor.params_written},
         {"kpis_influenced", descriptor.kpis_influenced},
         {"depends_on", descriptor.depends_on}};
}

void from_json(const nlohmann::json& j, CfDescriptor& descriptor) {
    j.at("cf_id").get_to(descriptor.cf_id);
    j.at("objective_kpi").get_to(descriptor.objective_kpi);
    j.at("params_written").get_to(descriptor.params_written);
    descriptor.kpis_influenced = j.value("kpis_influenced", std::set<std::string>{});
    descriptor.depends_on = j.value("depends_on", std::set<std::string>{});
}

} // namespace cancoord
