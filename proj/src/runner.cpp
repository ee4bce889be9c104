#include "cancoord/runner.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "cancoord/carrier.hpp"
#include "cancoord/conflict.hpp"
#include "cancoord/persistence.hpp"

namespace cancoord {

namespace {

// Shortest round-trip formatting, identical to the JSON encoding of the
// same number, so the CSV and the logs never disagree.
std::string format_number(double v) {
    return nlohmann::json(v).dump();
}

std::vector<CfDescriptor> descriptors_of(const Scenario& scenario) {
    std::vector<CfDescriptor> descriptors;
    descriptors.reserve(scenario.cfs.size());
    for (const auto& cf : scenario.cfs)
        descriptors.push_back(cf.descriptor);
    return descriptors;
}

// One parameter grid per CF; the reference setup is single-parameter CFs.
const ParameterGrid& grid_for(const CfConfig& cf,
                              const std::map<std::string, ParameterGrid>& grids) {
    return grids.at(*cf.descriptor.params_written.begin());
}

void write_utilities_csv(const std::filesystem::path& path, const Scenario& scenario,
                         const std::map<std::string, ParameterGrid>& grids,
                         const std::vector<std::unique_ptr<CfAgent>>& agents) {
    if (scenario.parameters.empty())
        return;
    const ParameterGrid& grid = grids.at(scenario.parameters.front().name);

    std::vector<const CfAgent*> writers;
    for (const auto& agent : agents)
        if (agent->parameter() == grid.spec.name && agent->trained())
            writers.push_back(agent.get());

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "parameter_value";
    for (const CfAgent* agent : writers)
        out << "," << agent->id();
    out << ",nswf_product\n";

    std::vector<UtilityTable> tables;
    tables.reserve(writers.size());
    for (const CfAgent* agent : writers)
        tables.push_back(agent->answer_info_request(grid.spec.name, grid.values).table);

    for (std::size_t i = 0; i < grid.size(); ++i) {
        out << format_number(grid.values[i]);
        std::vector<double> row;
        row.reserve(tables.size());
        for (const auto& table : tables) {
            row.push_back(table.utilities[i]);
            out << "," << format_number(table.utilities[i]);
        }
        out << "," << format_number(nswf_value(row)) << "\n";
    }
}

} // namespace

RunOutputs run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                        std::optional<std::uint64_t> seed_override) {
    std::filesystem::create_directories(out_dir);
    const auto grids = scenario_grids(scenario);

    EnvConfig env = scenario.env;
    if (seed_override)
        env.seed = *seed_override;

    Controller controller(scenario.preloaded, grids, scenario.timeout_ticks);
    EventLogWriter log_writer(out_dir / "events.jsonl");
    for (const CoordEvent& event : controller.events())
        log_writer.append(event); // events emitted before the sink was attached
    controller.set_event_sink([&log_writer](const CoordEvent& e) { log_writer.append(e); });

    std::vector<std::unique_ptr<CfAgent>> agents;
    for (const auto& cf : scenario.cfs) {
        controller.register_cf(cf.descriptor);
        agents.push_back(std::make_unique<CfAgent>(cf, grid_for(cf, grids)));
    }

    InProcessCarrier carrier;
    carrier.attach(kControllerId, [&controller, &carrier](const CoordMessage& msg) {
        auto out = controller.handle(msg);
        // the controller's clock follows the carrier's
        auto timed_out = controller.advance_to(carrier.now());
        out.insert(out.end(), timed_out.begin(), timed_out.end());
        return out;
    });
    for (const auto& agent : agents) {
        CfAgent* raw = agent.get();
        carrier.attach(raw->id(), [raw](const CoordMessage& msg) { return raw->handle(msg); });
    }

    auto samples_for = [&grids](const EnvConfig& environment, const CfAgent& agent) {
        const auto dataset = generate_dataset(environment, grids.at(agent.parameter()));
        auto it = dataset.find(agent.descriptor().objective_kpi);
        if (it == dataset.end())
            throw ValidationError("cf '" + agent.id() + "': environment produces no KPI '" +
                                  agent.descriptor().objective_kpi + "'");
        return it->second;
    };

    // Pre-operational training on the unshifted environment.
    for (const auto& agent : agents)
        agent->initial_train(samples_for(env, *agent));

    for (long cycle = 1; cycle <= scenario.cycles; ++cycle) {
        if (scenario.env_shift && scenario.env_shift->at_cycle == cycle)
            env = apply_shift(env, *scenario.env_shift);

        for (const auto& agent : agents) {
            auto request = agent->learning_cycle(samples_for(env, *agent));
            if (request)
                carrier.post(kControllerId, *request);
        }

        // Pump the carrier until the coordination round has settled.
        long guard = 0;
        while (!carrier.idle() || controller.busy()) {
            carrier.advance_tick();
            for (const Outbound& out : controller.advance_to(carrier.now()))
                carrier.post(out.to, out.msg);
            if (++guard > 100000)
                throw Error("coordination round did not settle");
        }
    }

    RunOutputs outputs;
    outputs.events_path = out_dir / "events.jsonl";
    outputs.utilities_csv_path = out_dir / "utilities.csv";
    outputs.result_path = out_dir / "result.json";
    outputs.artifact_path = out_dir / "run.json";
    outputs.final_config = controller.current_config();
    outputs.final_welfare = controller.latest_result();
    outputs.final_tick = carrier.now();

    write_utilities_csv(outputs.utilities_csv_path, scenario, grids, agents);

    const auto descriptors = descriptors_of(scenario);
    nlohmann::json result{
        {"final_configuration", outputs.final_config},
        {"welfare_result",
         outputs.final_welfare ? nlohmann::json(*outputs.final_welfare) : nlohmann::json(nullptr)},
        {"conflict",
         {{"edges", classify_conflicts(descriptors)},
          {"groups", conflict_groups(classify_conflicts(descriptors), descriptors)}}}};
    {
        std::ofstream out(outputs.result_path, std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + outputs.result_path.string() + "'");
        out << result.dump(2) << '\n';
    }

    RunArtifact artifact;
    artifact.scenario_hash = content_hash_hex(scenario.raw);
    artifact.seed = env.seed;
    artifact.events_path = outputs.events_path.string();
    artifact.result_path = outputs.result_path.string();
    artifact.created_at = outputs.final_tick;
    write_artifact(outputs.artifact_path, artifact);

    log_writer.flush();
    return outputs;
}

nlohmann::json classify_report(const Scenario& scenario) {
    const auto descriptors = descriptors_of(scenario);
    const auto edges = classify_conflicts(descriptors);
    return {{"edges", edges}, {"groups", conflict_groups(edges, descriptors)}};
}

std::string classify_table(const nlohmann::json& report) {
    std::ostringstream out;
    out << "CF A        CF B        KIND            SUBJECT\n";
    for (const auto& edge : report.at("edges")) {
        std::string a = edge.at("cf_a").get<std::string>();
        std::string b = edge.at("cf_b").get<std::string>();
        std::string kind = edge.at("kind").get<std::string>();
        std::string subject = edge.at("subject").get<std::string>();
        a.resize(std::max<std::size_t>(a.size(), 11), ' ');
        b.resize(std::max<std::size_t>(b.size(), 11), ' ');
        kind.resize(std::max<std::size_t>(kind.size(), 15), ' ');
        out << a << " " << b << " " << kind << " " << (subject.empty() ? "-" : subject) << "\n";
    }
    out << "\nGROUPS\n";
    for (const auto& group : report.at("groups")) {
        out << "  {";
        for (std::size_t i = 0; i < group.size(); ++i)
            out << (i ? ", " : "") << group[i].get<std::string>();
        out << "}\n";
    }
    return out.str();
}

} // namespace cancoord
