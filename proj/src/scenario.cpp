#include "cancoord/scenario.hpp"

#include <fstream>
#include <sstream>

namespace cancoord {

namespace {

// nlohmann reports byte offsets; translate into a line number for the
// "file:line: message" diagnostic shape.
long line_of_offset(const std::string& text, std::size_t offset) {
    long line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

CfConfig parse_cf_block(const nlohmann::json& j, const std::string& origin, std::size_t index) {
    const std::string where = origin + ": cfs[" + std::to_string(index) + "]";
    CfConfig cf;
    try {
        cf.descriptor.cf_id = j.at("id").get<std::string>();
        cf.descriptor.objective_kpi = j.at("objective_kpi").get<std::string>();
        cf.descriptor.params_written =
            j.at("params_written").get<std::set<std::string>>();
        cf.descriptor.kpis_influenced =
            j.value("kpis_influenced", std::set<std::string>{});
        cf.descriptor.depends_on = j.value("depends_on", std::set<std::string>{});
        cf.minimizing = j.value("minimizing", false);
        cf.threshold_pct = j.value("threshold_pct", 5.0);
        if (j.contains("scale"))
            j.at("scale").get_to(cf.scale);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(where + ": " + e.what());
    }
    try {
        validate(cf.descriptor);
        validate(cf.scale);
    } catch (const Error& e) {
        throw ValidationError(where + ": " + e.what());
    }
    if (!(cf.threshold_pct > 0.0 && cf.threshold_pct < 100.0))
        throw ValidationError(where + ": threshold_pct must be in (0, 100)");
    return cf;
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(origin + ":" + std::to_string(line_of_offset(text, e.byte)) +
                              ": " + e.what());
    }

    Scenario scenario;
    scenario.raw = text;
    try {
        for (const auto& spec_json : j.at("parameters"))
            scenario.parameters.push_back(spec_json.get<ParameterSpec>());
        std::size_t index = 0;
        for (const auto& cf_json : j.at("cfs"))
            scenario.cfs.push_back(parse_cf_block(cf_json, origin, index++));
        if (j.contains("env"))
            j.at("env").get_to(scenario.env);
        else
            scenario.env.cells = default_cells(scenario.env.area);
        scenario.cycles = j.value("cycles", 0L);
        if (j.contains("preloaded_configuration"))
            j.at("preloaded_configuration").get_to(scenario.preloaded);
        scenario.timeout_ticks = j.value("timeout_ticks", 10L);
        scenario.output_dir = j.value("output_dir", std::string("out"));
        if (j.contains("env_shift")) {
            EnvShift shift;
            shift.at_cycle = j.at("env_shift").at("at_cycle").get<long>();
            shift.overrides = j.at("env_shift");
            shift.overrides.erase("at_cycle");
            scenario.env_shift = std::move(shift);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(origin + ": " + e.what());
    }

    // cross-field validation
    for (const auto& spec : scenario.parameters) {
        try {
            validate(spec);
        } catch (const Error& e) {
            throw ValidationError(origin + ": parameters: " + e.what());
        }
    }
    const auto grids = scenario_grids(scenario);
    for (const auto& cf : scenario.cfs)
        for (const auto& param : cf.descriptor.params_written)
            if (!grids.count(param))
                throw ValidationError(origin + ": cf '" + cf.descriptor.cf_id +
                                      "' writes undeclared parameter '" + param + "'");
    try {
        validate_configuration(scenario.preloaded, grids);
        validate(scenario.env);
    } catch (const Error& e) {
        throw ValidationError(origin + ": " + e.what());
    }
    if (scenario.cycles < 0)
        throw ValidationError(origin + ": cycles must be >= 0");
    if (scenario.timeout_ticks <= 0)
        throw ValidationError(origin + ": timeout_ticks must be positive");
    if (scenario.env_shift && scenario.env_shift->at_cycle < 1)
        throw ValidationError(origin + ": env_shift.at_cycle must be >= 1");
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.filename().string());
}

std::map<std::string, ParameterGrid> scenario_grids(const Scenario& scenario) {
    std::map<std::string, ParameterGrid> grids;
    for (const auto& spec : scenario.parameters) {
        if (grids.count(spec.name))
            throw ValidationError("duplicate parameter '" + spec.name + "'");
        grids.emplace(spec.name, build_grid(spec));
    }
    return grids;
}

EnvConfig apply_shift(const EnvConfig& env, const EnvShift& shift) {
    nlohmann::json merged = nlohmann::json(env);
    merged.update(shift.overrides);
    EnvConfig shifted = merged.get<EnvConfig>();
    validate(shifted);
    return shifted;
}

} // namespace cancoord
