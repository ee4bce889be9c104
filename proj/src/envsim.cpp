#include "cancoord/envsim.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace cancoord {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Self-contained uniform generator so placements do not depend on the
// standard library's distribution implementation.
class UniformSource {
  public:
    explicit UniformSource(std::uint64_t seed) : state_(seed) {}

    double next_unit() { // [0, 1)
        state_ = splitmix64(state_);
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

double rsrp_dbm(const EnvConfig& env, double txp_dbm, const std::array<double, 2>& cell,
                const std::array<double, 2>& user) {
    const double dx = user[0] - cell[0];
    const double dy = user[1] - cell[1];
    const double distance = std::max(std::sqrt(dx * dx + dy * dy), 1.0); // 1 m floor
    return txp_dbm - (env.ref_loss_db + 10.0 * env.path_loss_exponent * std::log10(distance));
}

} // namespace

void validate(const EnvConfig& env) {
    if (!(env.area > 0.0))
        throw ValidationError("env: area must be positive");
    if (env.user_count <= 0)
        throw ValidationError("env: user_count must be positive");
    if (env.placements <= 0)
        throw ValidationError("env: placements must be positive");
    if (!(env.path_loss_exponent > 2.0))
        throw ValidationError("env: path_loss_exponent must be > 2");
    if (env.cells.empty())
        throw ValidationError("env: at least the center cell is required");
}

std::vector<std::array<double, 2>> default_cells(double area) {
    const double mid = area / 2.0;
    return {{mid, mid}, {0.0, 0.0}, {0.0, area}, {area, 0.0}, {area, area}};
}

std::uint64_t placement_seed(const EnvConfig& env, int placement_index) {
    return splitmix64(env.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(placement_index + 1));
}

ScenarioSnapshot snapshot(const EnvConfig& env, double txp_center_dbm,
                          std::uint64_t placement_seed) {
    validate(env);
    ScenarioSnapshot snap;
    snap.users.reserve(static_cast<std::size_t>(env.user_count));
    UniformSource rng(placement_seed);
    for (int u = 0; u < env.user_count; ++u) {
        const double x = rng.next_unit() * env.area;
        const double y = rng.next_unit() * env.area;
        snap.users.push_back({x, y});
    }

    snap.serving_cell.resize(snap.users.size());
    snap.best_rsrp.resize(snap.users.size());
    for (std::size_t u = 0; u < snap.users.size(); ++u) {
        int best_cell = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < env.cells.size(); ++c) {
            const double txp = c == 0 ? txp_center_dbm : env.neighbor_txp_dbm;
            const double level = rsrp_dbm(env, txp, env.cells[c], snap.users[u]);
            if (level > best) { // strict: ties keep the lowest cell index
                best = level;
                best_cell = static_cast<int>(c);
            }
        }
        snap.serving_cell[u] = best_cell;
        snap.best_rsrp[u] = best;
    }
    return snap;
}

KpiPoint evaluate_kpis(const EnvConfig& env, double txp_center_dbm,
                       std::uint64_t placement_seed) {
    const ScenarioSnapshot snap = snapshot(env, txp_center_dbm, placement_seed);
    KpiPoint kpi;
    int served = 0;
    int covered = 0;
    for (std::size_t u = 0; u < snap.users.size(); ++u) {
        if (snap.serving_cell[u] == 0)
            ++served;
        if (snap.best_rsrp[u] >= env.coverage_threshold_dbm)
            ++covered;
    }
    kpi.load = static_cast<double>(served);
    kpi.coverage = static_cast<double>(covered) / static_cast<double>(snap.users.size());
    return kpi;
}

std::map<std::string, std::vector<KpiSample>> generate_dataset(const EnvConfig& env,
                                                               const ParameterGrid& grid) {
    validate(env);
    std::map<std::string, std::vector<KpiSample>> dataset;
    auto& load_samples = dataset[kLoadKpi];
    auto& coverage_samples = dataset[kCoverageKpi];
    load_samples.reserve(static_cast<std::size_t>(env.placements) * grid.size());
    coverage_samples.reserve(static_cast<std::size_t>(env.placements) * grid.size());
    for (int p = 0; p < env.placements; ++p) {
        const std::uint64_t seed = placement_seed(env, p);
        for (double txp : grid.values) {
            const KpiPoint kpi = evaluate_kpis(env, txp, seed);
            load_samples.push_back({txp, kpi.load});
            coverage_samples.push_back({txp, kpi.coverage});
        }
    }
    return dataset;
}

void write_dataset_csv(const EnvConfig& env, const ParameterGrid& grid,
                       const std::string& path) {
    validate(env);
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write dataset csv '" + path + "'");
    out << "kpi,txp,value,placement_seed\n";
    for (const char* kpi : {kLoadKpi, kCoverageKpi}) {
        for (int p = 0; p < env.placements; ++p) {
            const std::uint64_t seed = placement_seed(env, p);
            for (double txp : grid.values) {
                const KpiPoint point = evaluate_kpis(env, txp, seed);
                const double value = kpi == std::string(kLoadKpi) ? point.load : point.coverage;
                out << kpi << ',' << nlohmann::json(txp).dump() << ','
                    << nlohmann::json(value).dump() << ',' << seed << '\n';
            }
        }
    }
}

void to_json(nlohmann::json& j, const EnvConfig& env) {
    j = {{"area", env.area},
         {"cells", env.cells},
         {"user_count", env.user_count},
         {"placements", env.placements},
         {"seed", env.seed},
         {"path_loss_exponent", env.path_loss_exponent},
         {"ref_loss_db", env.ref_loss_db},
         {"neighbor_txp_dbm", env.neighbor_txp_dbm},
         {"coverage_threshold_dbm", env.coverage_threshold_dbm}};
}

void from_json(const nlohmann::json& j, EnvConfig& env) {
    env = EnvConfig{};
    env.area = j.value("area", env.area);
    if (j.contains("cells"))
        j.at("cells").get_to(env.cells);
    else
        env.cells = default_cells(env.area);
    env.user_count = j.value("user_count", env.user_count);
    env.placements = j.value("placements", env.placements);
    env.seed = j.value("seed", env.seed);
    env.path_loss_exponent = j.value("path_loss_exponent", env.path_loss_exponent);
    env.ref_loss_db = j.value("ref_loss_db", env.ref_loss_db);
    env.neighbor_txp_dbm = j.value("neighbor_txp_dbm", env.neighbor_txp_dbm);
    env.coverage_threshold_dbm = j.value("coverage_threshold_dbm", env.coverage_threshold_dbm);
}

} // namespace cancoord
