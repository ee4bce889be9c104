#include "cancoord/nswf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cancoord {

double nswf_value(const std::vector<double>& utilities) {
    bool log_domain = true;
    for (double u : utilities) {
        if (u < 0.0 || !std::isfinite(u))
            throw ValidationError("nswf_value: utilities must be finite and nonnegative");
        if (u < 1e-12)
            log_domain = false;
    }
    // Accumulate in sorted order so the result is independent of how the
    // caller happens to order the agents.
    std::vector<double> ordered(utilities);
    std::sort(ordered.begin(), ordered.end());
    if (log_domain) {
        double sum = 0.0;
        for (double u : ordered)
            sum += std::log(u);
        return std::exp(sum);
    }
    double product = 1.0;
    for (double u : ordered)
        product *= u;
    return product;
}

namespace {

struct Candidate {
    double value;
    std::size_t index; // into the shared grid
    double welfare;
    double spread;
};

// "a is preferable to b" among welfare-tied candidates.
bool fairer(const Candidate& a, const Candidate& b) {
    if (a.spread != b.spread)
        return a.spread < b.spread;
    return a.value < b.value;
}

} // namespace

WelfareResult nswf_optimize(const std::vector<CfUtility>& tables,
                            const std::vector<double>& candidates) {
    if (tables.empty())
        throw ValidationError("nswf_optimize: no utility tables");
    if (candidates.empty())
        throw ValidationError("nswf_optimize: no candidates");

    const UtilityTable& reference = tables.front().table;
    validate(reference);
    for (const CfUtility& labeled : tables) {
        validate(labeled.table);
        if (labeled.cf_id.empty())
            throw ValidationError("nswf_optimize: table without cf_id");
        if (labeled.table.parameter != reference.parameter ||
            labeled.table.grid != reference.grid)
            throw ValidationError("nswf_optimize: tables disagree on parameter or grid");
    }

    auto index_of = [&reference](double value) -> std::size_t {
        auto it = std::lower_bound(reference.grid.begin(), reference.grid.end(),
                                   value - kGridTolerance);
        if (it == reference.grid.end() || std::abs(*it - value) > kGridTolerance)
            throw ValidationError("nswf_optimize: candidate " + std::to_string(value) +
                                  " is not on the shared grid");
        return static_cast<std::size_t>(it - reference.grid.begin());
    };

    std::vector<Candidate> evaluated;
    evaluated.reserve(candidates.size());
    std::vector<double> utilities(tables.size());
    double max_welfare = -std::numeric_limits<double>::infinity();
    for (double value : candidates) {
        const std::size_t idx = index_of(value);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < tables.size(); ++t) {
            const double u = tables[t].table.utilities[idx];
            utilities[t] = u;
            lo = std::min(lo, u);
            hi = std::max(hi, u);
        }
        const double welfare = nswf_value(utilities);
        evaluated.push_back({value, idx, welfare, hi - lo});
        max_welfare = std::max(max_welfare, welfare);
    }

    // Fixed left-to-right reduction keeps tie resolution deterministic.
    const double cutoff = max_welfare - kWelfareRelTolerance * std::abs(max_welfare);
    const Candidate* best = nullptr;
    for (const Candidate& c : evaluated) {
        if (c.welfare < cutoff)
            continue;
        if (best == nullptr || fairer(c, *best))
            best = &c;
    }

    WelfareResult result;
    result.chosen_value = best->value;
    result.welfare = best->welfare;
    result.utility_spread = best->spread;
    result.candidate_count = candidates.size();
    for (const CfUtility& labeled : tables)
        result.per_cf_utilities[labeled.cf_id] = labeled.table.utilities[best->index];
    return result;
}

std::vector<double> candidate_set(const std::vector<OptimalConfigRange>& ranges,
                                  const ParameterGrid& grid) {
    double lo = grid.front();
    double hi = grid.back();
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (ranges[i].parameter != ranges.front().parameter)
            throw ValidationError("candidate_set: ranges describe different parameters");
        lo = std::max(lo, ranges[i].min_value);
        hi = std::min(hi, ranges[i].max_value);
    }

    std::vector<double> candidates;
    for (double v : grid.values)
        if (v >= lo - kGridTolerance && v <= hi + kGridTolerance)
            candidates.push_back(v);
    if (candidates.empty())
        return grid.values; // disjoint ranges: search globally
    return candidates;
}

void to_json(nlohmann::json& j, const WelfareResult& result) {
    j = {{"chosen_value", result.chosen_value},
         {"welfare", result.welfare},
         {"per_cf_utilities", result.per_cf_utilities},
         {"utility_spread", result.utility_spread},
         {"candidate_count", result.candidate_count}};
}

void from_json(const nlohmann::json& j, WelfareResult& result) {
    j.at("chosen_value").get_to(result.chosen_value);
    j.at("welfare").get_to(result.welfare);
    j.at("per_cf_utilities").get_to(result.per_cf_utilities);
    j.at("utility_spread").get_to(result.utility_spread);
    j.at("candidate_count").get_to(result.candidate_count);
}

} // namespace cancoord
