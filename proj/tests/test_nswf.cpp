#include <doctest.h>

#include <cmath>
#include <random>

#include "cancoord/nswf.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cancoord;

TEST_CASE("nswf_value is the product of the utilities") {
    CHECK(nswf_value({1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nswf_value({0.998, 0.986}) == doctest::Approx(0.984028).epsilon(1e-9));
    CHECK(nswf_value({0.5, 0.0}) == 0.0);
    CHECK_THROWS_AS(nswf_value({0.5, -0.1}), ValidationError);
}

TEST_CASE("log-domain and direct products agree") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> exponent(-6.0, 0.0);
    std::uniform_int_distribution<int> count(1, 5);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> utilities;
        const int n = count(rng);
        for (int i = 0; i < n; ++i)
            utilities.push_back(std::pow(10.0, exponent(rng))); // [1e-6, 1]
        const double via_impl = nswf_value(utilities);
        const double via_direct = oracle::direct_product(utilities);
        CHECK(via_impl == doctest::Approx(via_direct).epsilon(1e-9));
    }
}

namespace {

CfUtility labeled(std::string id, std::vector<double> grid, std::vector<double> utilities) {
    return {std::move(id), {"TXP", std::move(grid), std::move(utilities)}};
}

std::vector<double> txp_grid() {
    std::vector<double> grid;
    for (int v = 50; v <= 80; ++v)
        grid.push_back(v);
    return grid;
}

// Gaussian-bump utilities with different widths, peaking at 62 and 69.
std::vector<CfUtility> reference_fixture() {
    const auto grid = txp_grid();
    std::vector<double> narrow, wide;
    for (double x : grid) {
        narrow.push_back(std::exp(-(x - 62) * (x - 62) / (2 * 5.0 * 5.0)));
        wide.push_back(std::exp(-(x - 69) * (x - 69) / (2 * 8.0 * 8.0)));
    }
    return {labeled("MLB", grid, narrow), labeled("CCO", grid, wide)};
}

} // namespace

TEST_CASE("two unimodal tables: the compromise lands strictly between the peaks") {
    const auto tables = reference_fixture();
    const auto grid = txp_grid();

    const oracle::Choice expected = oracle::optimize(tables, grid);
    REQUIRE(expected.value == 64.0); // frozen from the brute-force scan

    const WelfareResult result = nswf_optimize(tables, grid);
    CHECK(result.chosen_value == expected.value);
    CHECK(result.chosen_value > 62.0);
    CHECK(result.chosen_value < 69.0);
    CHECK(result.welfare == doctest::Approx(expected.welfare).epsilon(1e-12));
    CHECK(result.candidate_count == grid.size());
    CHECK(result.per_cf_utilities.at("MLB") ==
          doctest::Approx(expected.utilities.at("MLB")).epsilon(1e-12));
}

TEST_CASE("a single table selects its own argmax") {
    const auto grid = txp_grid();
    std::vector<double> utilities(grid.size(), 0.1);
    utilities[12] = 1.0; // TXP = 62
    const WelfareResult result = nswf_optimize({labeled("MLB", grid, utilities)}, grid);
    CHECK(result.chosen_value == 62.0);
    CHECK(result.welfare == 1.0);
    CHECK(result.utility_spread == 0.0);
}

TEST_CASE("equal products break toward the smaller utility spread") {
    // candidates 1 and 2 both have welfare 0.0625 exactly (dyadic inputs);
    // candidate 2's utilities are balanced (spread 0) while candidate 1's
    // differ by 0.375
    const std::vector<double> grid = {1, 2, 3};
    const auto tables = std::vector<CfUtility>{
        labeled("A", grid, {0.5, 0.25, 0.01}),
        labeled("B", grid, {0.125, 0.25, 0.01}),
    };
    const oracle::Choice expected = oracle::optimize(tables, grid);
    REQUIRE(expected.value == 2.0);

    const WelfareResult result = nswf_optimize(tables, grid);
    CHECK(result.chosen_value == 2.0);
    CHECK(result.utility_spread == 0.0);
}

TEST_CASE("optimize validates its inputs") {
    const std::vector<double> grid = {1, 2, 3};
    const auto a = labeled("A", grid, {0.1, 0.2, 0.3});
    CHECK_THROWS_AS(nswf_optimize({}, grid), ValidationError);
    CHECK_THROWS_AS(nswf_optimize({a}, {}), ValidationError);
    CHECK_THROWS_AS(nswf_optimize({a}, {9.0}), ValidationError); // off-grid candidate
    const auto mismatched = labeled("B", {1, 2, 4}, {0.1, 0.2, 0.3});
    CHECK_THROWS_AS(nswf_optimize({a, mismatched}, grid), ValidationError);
}

TEST_CASE("candidate_set intersects ranges on the grid") {
    const ParameterGrid grid = build_grid({"TXP", "dBm", 50, 80, 1});

    auto candidates = candidate_set({{"TXP", 60, 68, 5}, {"TXP", 64, 72, 5}}, grid);
    CHECK(candidates == std::vector<double>{64, 65, 66, 67, 68});

    candidates = candidate_set({{"TXP", 60, 62, 5}, {"TXP", 65, 70, 5}}, grid);
    CHECK(candidates == grid.values); // disjoint: fall back to the full grid

    candidates = candidate_set({{"TXP", 66, 66, 5}}, grid);
    CHECK(candidates == std::vector<double>{66});

    CHECK(candidate_set({}, grid) == grid.values);
    CHECK_THROWS_AS(candidate_set({{"TXP", 60, 62, 5}, {"RET", 1, 2, 5}}, grid),
                    ValidationError);
}

TEST_CASE("optimize matches the exhaustive oracle on random instances") {
    std::mt19937_64 rng(1009);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        auto tables = gen::random_instance(rng);
        if (trial % 5 == 0)
            gen::plant_exact_tie(rng, tables);
        if (trial % 7 == 0) // sprinkle zero utilities
            for (auto& t : tables)
                for (double& u : t.table.utilities)
                    if (uniform(rng) < 0.05)
                        u = 0.0;
        const auto& grid = tables.front().table.grid;

        const WelfareResult result = nswf_optimize(tables, grid);
        const oracle::Choice expected = oracle::optimize(tables, grid);
        CHECK(result.chosen_value == expected.value);
        CHECK(result.utility_spread == expected.spread);
        CHECK(std::abs(result.welfare - expected.welfare) <=
              1e-9 * std::max(1.0, std::abs(expected.welfare)));
    }
}

TEST_CASE("scaling one CF's utilities never moves the chosen value") {
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> factor(0.1, 10.0);
    std::uniform_int_distribution<std::size_t> which(0, 99);
    for (int trial = 0; trial < 200; ++trial) {
        auto tables = gen::random_instance(rng);
        const auto& grid = tables.front().table.grid;
        const double baseline = nswf_optimize(tables, grid).chosen_value;

        auto scaled = tables;
        const double c = factor(rng);
        auto& target = scaled[which(rng) % scaled.size()];
        for (double& u : target.table.utilities)
            u *= c;
        CHECK(nswf_optimize(scaled, grid).chosen_value == baseline);
    }
}

TEST_CASE("reordering the tables changes nothing") {
    std::mt19937_64 rng(3001);
    for (int trial = 0; trial < 100; ++trial) {
        auto tables = gen::random_instance(rng);
        const auto& grid = tables.front().table.grid;
        const WelfareResult baseline = nswf_optimize(tables, grid);

        std::shuffle(tables.begin(), tables.end(), rng);
        const WelfareResult shuffled = nswf_optimize(tables, grid);
        CHECK(shuffled.chosen_value == baseline.chosen_value);
        CHECK(shuffled.welfare == baseline.welfare);
        CHECK(shuffled.per_cf_utilities == baseline.per_cf_utilities);
    }
}

TEST_CASE("betweenness for strictly unimodal pairs") {
    std::mt19937_64 rng(4005);
    std::uniform_int_distribution<std::size_t> points(10, 60);
    for (int trial = 0; trial < 300; ++trial) {
        const auto grid = gen::integer_grid(points(rng));
        std::uniform_int_distribution<std::size_t> peak(0, grid.size() - 1);
        std::size_t a = peak(rng);
        std::size_t b = peak(rng);
        if (a > b)
            std::swap(a, b);
        const auto tables = std::vector<CfUtility>{
            {"A", gen::unimodal_table(rng, grid, a)},
            {"B", gen::unimodal_table(rng, grid, b)},
        };
        const double chosen = nswf_optimize(tables, grid).chosen_value;
        CHECK(chosen >= grid[a]);
        CHECK(chosen <= grid[b]);
    }
}

TEST_CASE("welfare results round-trip through JSON") {
    WelfareResult result;
    result.chosen_value = 66;
    result.welfare = 0.984028;
    result.per_cf_utilities = {{"MLB", 0.998}, {"CCO", 0.986}};
    result.utility_spread = 0.012;
    result.candidate_count = 31;
    CHECK(nlohmann::json(result).get<WelfareResult>() == result);
}
