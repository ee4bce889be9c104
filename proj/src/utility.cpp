#include "cancoord/utility.hpp"

#include <algorithm>
#include <cmath>

namespace cancoord {

void validate(const UtilityScale& scale) {
    if (!(scale.lo < scale.hi))
        throw ValidationError("utility scale: lo must be < hi");
}

void validate(const UtilityTable& table) {
    if (table.parameter.empty())
        throw ValidationError("utility table: parameter name must not be empty");
    if (table.grid.size() != table.utilities.size())
        throw ValidationError("utility table '" + table.parameter +
                              "': grid and utilities lengths differ");
    if (table.grid.size() < 2)
        throw ValidationError("utility table '" + table.parameter + "': needs at least 2 points");
    for (std::size_t i = 1; i < table.grid.size(); ++i)
        if (!(table.grid[i - 1] < table.grid[i]))
            throw ValidationError("utility table '" + table.parameter +
                                  "': grid must be strictly increasing");
    for (double u : table.utilities)
        if (!std::isfinite(u))
            throw ValidationError("utility table '" + table.parameter +
                                  "': utilities must be finite");
}

UtilityTable normalize_linear(const std::string& parameter, std::vector<KpiSample> raw,
                              const UtilityScale& scale) {
    validate(scale);
    if (raw.empty())
        throw ValidationError("normalize_linear: no samples");

    std::sort(raw.begin(), raw.end(), [](const KpiSample& a, const KpiSample& b) {
        return a.parameter_value < b.parameter_value;
    });

    double maxv = raw.front().objective_value;
    for (const KpiSample& s : raw) {
        if (s.objective_value < 0.0)
            throw ValidationError("normalize_linear: negative objective value");
        maxv = std::max(maxv, s.objective_value);
    }
    if (!(maxv > 0.0))
        throw DegenerateObjectiveError("normalize_linear: maximum objective value is not positive");

    UtilityTable table;
    table.parameter = parameter;
    table.grid.reserve(raw.size());
    table.utilities.reserve(raw.size());
    for (const KpiSample& s : raw) {
        table.grid.push_back(s.parameter_value);
        // The argmax must land on scale.hi exactly, so bypass the arithmetic there.
        const double u = s.objective_value == maxv
                             ? scale.hi
                             : scale.lo + (s.objective_value / maxv) * (scale.hi - scale.lo);
        table.utilities.push_back(u);
    }
    validate(table);
    return table;
}

std::vector<KpiSample> invert_for_minimization(std::vector<KpiSample> raw) {
    if (raw.empty())
        throw ValidationError("invert_for_minimization: no samples");
    double maxv = raw.front().objective_value;
    for (const KpiSample& s : raw)
        maxv = std::max(maxv, s.objective_value);
    for (KpiSample& s : raw)
        s.objective_value = maxv - s.objective_value;
    return raw;
}

std::size_t argmax_index(const UtilityTable& table) {
    validate(table);
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.utilities.size(); ++i)
        if (table.utilities[i] > table.utilities[best])
            best = i;
    return best;
}

OptimalConfigRange optimal_config_range(const UtilityTable& table, double threshold_pct) {
    if (!(threshold_pct > 0.0 && threshold_pct < 100.0))
        throw ValidationError("optimal_config_range: threshold_pct must be in (0, 100)");
    const std::size_t peak = argmax_index(table); // validates the table
    const double cutoff = table.utilities[peak] * (1.0 - threshold_pct / 100.0);

    std::size_t lo = peak;
    while (lo > 0 && table.utilities[lo - 1] >= cutoff)
        --lo;
    std::size_t hi = peak;
    while (hi + 1 < table.utilities.size() && table.utilities[hi + 1] >= cutoff)
        ++hi;

    OptimalConfigRange range;
    range.parameter = table.parameter;
    range.min_value = table.grid[lo];
    range.max_value = table.grid[hi];
    range.threshold_pct = threshold_pct;
    return range;
}

bool ranges_identical(const OptimalConfigRange& a, const OptimalConfigRange& b) {
    if (a.parameter != b.parameter)
        throw ValidationError("ranges_identical: ranges describe different parameters");
    return a.min_value == b.min_value && a.max_value == b.max_value;
}

void to_json(nlohmann::json& j, const UtilityScale& scale) {
    j = {{"lo", scale.lo}, {"hi", scale.hi}};
}

void from_json(const nlohmann::json& j, UtilityScale& scale) {
    j.at("lo").get_to(scale.lo);
    j.at("hi").get_to(scale.hi);
}

void to_json(nlohmann::json& j, const UtilityTable& table) {
    j = {{"parameter", table.parameter}, {"grid", table.grid}, {"utilities", table.utilities}};
}

void from_json(const nlohmann::json& j, UtilityTable& table) {
    j.at("parameter").get_to(table.parameter);
    j.at("grid").get_to(table.grid);
    j.at("utilities").get_to(table.utilities);
}

void to_json(nlohmann::json& j, const OptimalConfigRange& range) {
    j = {{"parameter", range.parameter},
         {"min_value", range.min_value},
         {"max_value", range.max_value},
         {"threshold_pct", range.threshold_pct}};
}

void from_json(const nlohmann::json& j, OptimalConfigRange& range) {
    j.at("parameter").get_to(range.parameter);
    j.at("min_value").get_to(range.min_value);
    j.at("max_value").get_to(range.max_value);
    j.at("threshold_pct").get_to(range.threshold_pct);
}

} // namespace cancoord
