#include <doctest.h>

#include <cmath>

#include "cancoord/envsim.hpp"

using namespace cancoord;

namespace {

EnvConfig small_env() {
    EnvConfig env;
    env.cells = default_cells(env.area);
    env.user_count = 60;
    env.placements = 5;
    env.seed = 99;
    return env;
}

ParameterGrid txp_grid() {
    return build_grid({"TXP", "dBm", 50, 80, 1});
}

} // namespace

TEST_CASE("kpi evaluation is deterministic") {
    const EnvConfig env = small_env();
    const auto seed = placement_seed(env, 0);
    const KpiPoint a = evaluate_kpis(env, 66, seed);
    const KpiPoint b = evaluate_kpis(env, 66, seed);
    CHECK(a.load == b.load);
    CHECK(a.coverage == b.coverage);

    const auto d1 = generate_dataset(env, txp_grid());
    const auto d2 = generate_dataset(env, txp_grid());
    CHECK(d1 == d2);
}

TEST_CASE("serving cell is the argmax with lowest-index tie-break") {
    const EnvConfig env = small_env();
    const auto snap = snapshot(env, 66, placement_seed(env, 1));
    REQUIRE(snap.users.size() == static_cast<std::size_t>(env.user_count));
    for (std::size_t u = 0; u < snap.users.size(); ++u) {
        double best = -1e300;
        int best_cell = 0;
        for (std::size_t c = 0; c < env.cells.size(); ++c) {
            const double txp = c == 0 ? 66.0 : env.neighbor_txp_dbm;
            const double dx = snap.users[u][0] - env.cells[c][0];
            const double dy = snap.users[u][1] - env.cells[c][1];
            const double d = std::max(std::hypot(dx, dy), 1.0);
            const double rsrp =
                txp - (env.ref_loss_db + 10.0 * env.path_loss_exponent * std::log10(d));
            if (rsrp > best) {
                best = rsrp;
                best_cell = static_cast<int>(c);
            }
        }
        CHECK(snap.serving_cell[u] == best_cell);
        CHECK(snap.best_rsrp[u] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("raising the center TXP never sheds load or coverage") {
    const EnvConfig env = small_env();
    const ParameterGrid grid = txp_grid();
    for (int p = 0; p < env.placements; ++p) {
        const auto seed = placement_seed(env, p);
        KpiPoint previous = evaluate_kpis(env, grid.values.front(), seed);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const KpiPoint current = evaluate_kpis(env, grid.values[i], seed);
            CHECK(current.load >= previous.load);
            CHECK(current.coverage >= previous.coverage);
            previous = current;
        }
    }
}

TEST_CASE("an unhearable center cell serves nobody") {
    EnvConfig env = small_env();
    env.ref_loss_db = 500; // drowns the center cell only when its TXP is low
    env.neighbor_txp_dbm = 565;
    const KpiPoint kpi = evaluate_kpis(env, 50, placement_seed(env, 0));
    CHECK(kpi.load == 0.0);
}

TEST_CASE("dataset shape and bounds") {
    const EnvConfig env = small_env();
    const ParameterGrid grid = txp_grid();
    const auto dataset = generate_dataset(env, grid);
    REQUIRE(dataset.count(kLoadKpi));
    REQUIRE(dataset.count(kCoverageKpi));
    CHECK(dataset.at(kLoadKpi).size() == static_cast<std::size_t>(env.placements) * grid.size());
    CHECK(dataset.at(kCoverageKpi).size() ==
          static_cast<std::size_t>(env.placements) * grid.size());
    for (const KpiSample& s : dataset.at(kCoverageKpi)) {
        CHECK(s.objective_value >= 0.0);
        CHECK(s.objective_value <= 1.0);
    }
    for (const KpiSample& s : dataset.at(kLoadKpi)) {
        CHECK(s.objective_value >= 0.0);
        CHECK(s.objective_value <= env.user_count);
    }
}

TEST_CASE("env config validation and JSON round-trip") {
    EnvConfig env = small_env();
    CHECK(nlohmann::json(env).get<EnvConfig>() == env);

    env.user_count = 0;
    CHECK_THROWS_AS(validate(env), ValidationError);
    env = small_env();
    env.path_loss_exponent = 1.5;
    CHECK_THROWS_AS(validate(env), ValidationError);
    env = small_env();
    env.placements = 0;
    CHECK_THROWS_AS(validate(env), ValidationError);
}
