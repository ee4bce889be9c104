#include <csignal>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cancoord/persistence.hpp"
#include "cancoord/runner.hpp"
#include "cancoord/tcp_transport.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void handle_signal(int) {
    g_stop = 1;
}

int cmd_run(const std::string& path, const std::string& out_override,
            std::optional<std::uint64_t> seed) {
    const cancoord::Scenario scenario = cancoord::load_scenario(path);
    const std::string out_dir = out_override.empty() ? scenario.output_dir : out_override;
    const cancoord::RunOutputs outputs = cancoord::run_scenario(scenario, out_dir, seed);

    std::cout << "run complete\n"
              << "  events:    " << outputs.events_path.string() << "\n"
              << "  utilities: " << outputs.utilities_csv_path.string() << "\n"
              << "  result:    " << outputs.result_path.string() << "\n";
    for (const auto& [name, value] : outputs.final_config.entries)
        std::cout << "  " << name << " = " << value << "\n";
    if (outputs.final_welfare)
        std::cout << "  welfare = " << outputs.final_welfare->welfare << "\n";
    return 0;
}

int cmd_classify(const std::string& path) {
    const cancoord::Scenario scenario = cancoord::load_scenario(path);
    const nlohmann::json report = cancoord::classify_report(scenario);
    std::cout << report.dump(2) << "\n\n" << cancoord::classify_table(report);
    return 0;
}

int cmd_serve(const std::string& path, const std::string& bind,
              const std::string& out_override) {
    const cancoord::Scenario scenario = cancoord::load_scenario(path);
    const std::string out_dir = out_override.empty() ? scenario.output_dir : out_override;

    const auto colon = bind.rfind(':');
    if (colon == std::string::npos)
        throw cancoord::ValidationError("--bind expects host:port, got '" + bind + "'");
    cancoord::TcpLineServer::Options options;
    options.host = bind.substr(0, colon);
    options.port = static_cast<std::uint16_t>(std::stoul(bind.substr(colon + 1)));

    const auto grids = cancoord::scenario_grids(scenario);
    cancoord::Controller controller(scenario.preloaded, grids, scenario.timeout_ticks);
    cancoord::EventLogWriter log_writer(std::filesystem::path(out_dir) / "events.jsonl");
    for (const cancoord::CoordEvent& event : controller.events())
        log_writer.append(event);
    controller.set_event_sink(
        [&log_writer](const cancoord::CoordEvent& e) { log_writer.append(e); });
    for (const auto& cf : scenario.cfs)
        controller.register_cf(cf.descriptor);

    cancoord::TcpLineServer server(controller, options);
    server.start();
    std::cout << "listening on " << options.host << ":" << server.port() << std::endl;

    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop && server.running())
        std::this_thread::sleep_for(std::chrono::milliseconds(50));

    server.stop();
    log_writer.flush();
    std::cout << "shut down; event log flushed to " << log_writer.path().string() << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordinated network parameter tuning: conflicting cognitive functions, "
                 "one controller, Nash-social-welfare arbitration"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    std::string bind = "127.0.0.1:4500";
    std::uint64_t seed = 0;
    bool seed_set = false;

    CLI::App* run = app.add_subcommand("run", "execute a scenario in-process");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_dir, "output directory (default: scenario's output_dir)");
    run->add_option("--seed", seed, "override the environment seed")
        ->each([&seed_set](const std::string&) { seed_set = true; });

    CLI::App* classify = app.add_subcommand("classify", "print the scenario's conflict graph");
    classify->add_option("scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* serve = app.add_subcommand("serve", "run the controller as a TCP service");
    serve->add_option("scenario", scenario_path, "scenario JSON file")->required();
    serve->add_option("--bind", bind, "host:port to listen on");
    serve->add_option("--out", out_dir, "output directory for the event log");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scenario_path, out_dir,
                           seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt);
        if (classify->parsed())
            return cmd_classify(scenario_path);
        if (serve->parsed())
            return cmd_serve(scenario_path, bind, out_dir);
    } catch (const cancoord::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
