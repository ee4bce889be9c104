#pragma once

// Seeded random-instance generators for the property tests.

#include <random>
#include <string>
#include <vector>

#include "cancoord/domain.hpp"
#include "cancoord/nswf.hpp"
#include "cancoord/utility.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::vector<double> integer_grid(std::size_t points, double start = 0.0) {
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = start + static_cast<double>(i);
    return grid;
}

inline cancoord::UtilityTable random_table(Rng& rng, const std::vector<double>& grid,
                                           double lo = 0.0, double hi = 1.0,
                                           std::string parameter = "TXP") {
    std::uniform_real_distribution<double> value(lo, hi);
    cancoord::UtilityTable table;
    table.parameter = std::move(parameter);
    table.grid = grid;
    table.utilities.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        table.utilities.push_back(value(rng));
    return table;
}

// Strictly unimodal: strictly increasing up to the peak, strictly
// decreasing after it, with increments large enough that no two points tie.
inline cancoord::UtilityTable unimodal_table(Rng& rng, const std::vector<double>& grid,
                                             std::size_t peak_index,
                                             std::string parameter = "TXP") {
    std::uniform_real_distribution<double> increment(0.01, 0.05);
    cancoord::UtilityTable table;
    table.parameter = std::move(parameter);
    table.grid = grid;
    table.utilities.assign(grid.size(), 0.0);
    table.utilities[peak_index] = 1.0;
    for (std::size_t i = peak_index; i > 0; --i)
        table.utilities[i - 1] = table.utilities[i] - increment(rng);
    for (std::size_t i = peak_index + 1; i < grid.size(); ++i)
        table.utilities[i] = table.utilities[i - 1] - increment(rng);
    for (double& u : table.utilities)
        u = std::max(u, 1e-6); // keep products positive
    return table;
}

// A set of CF-labeled tables sharing one grid.
inline std::vector<cancoord::CfUtility> random_instance(Rng& rng, std::size_t max_points = 100,
                                                        std::size_t max_cfs = 5) {
    std::uniform_int_distribution<std::size_t> points(2, max_points);
    std::uniform_int_distribution<std::size_t> cf_count(1, max_cfs);
    const auto grid = integer_grid(points(rng));
    std::vector<cancoord::CfUtility> tables;
    const std::size_t n = cf_count(rng);
    for (std::size_t c = 0; c < n; ++c)
        tables.push_back({"cf" + std::to_string(c), random_table(rng, grid)});
    return tables;
}

// Overwrites two candidate columns with dyadic utilities whose products tie
// exactly in binary floating point but whose spreads differ, so the fairness
// tie-break is actually exercised. Every other candidate is damped below the
// planted pair, making the tie the global maximum.
inline void plant_exact_tie(Rng& rng, std::vector<cancoord::CfUtility>& tables) {
    const std::size_t n = tables.front().table.grid.size();
    if (n < 2 || tables.size() < 2)
        return;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (a == b)
        b = (b + 1) % n;
    for (auto& labeled : tables)
        for (double& u : labeled.table.utilities)
            u *= 0.125;
    // exact product 0.25 at both planted candidates; spreads differ
    for (std::size_t t = 0; t < tables.size(); ++t) {
        tables[t].table.utilities[a] = t <= 1 ? 0.5 : 1.0;
        tables[t].table.utilities[b] = t == 0 ? 0.25 : 1.0;
    }
}

} // namespace gen
