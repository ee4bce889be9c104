#include "cancoord/persistence.hpp"

namespace cancoord {

EventLogWriter::EventLogWriter(const std::filesystem::path& path) : path_(path) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::trunc);
    if (!out_)
        throw Error("cannot open event log '" + path.string() + "' for writing");
}

void EventLogWriter::append(const CoordEvent& event) {
    out_ << nlohmann::json(event).dump() << '\n';
    if (!out_)
        throw Error("short write to event log '" + path_.string() + "'");
}

void EventLogWriter::flush() {
    out_.flush();
}

ControllerSnapshot replay(const std::filesystem::path& events_path) {
    std::ifstream in(events_path);
    if (!in)
        throw ReplayError("cannot open event log '" + events_path.string() + "'");

    ControllerSnapshot state;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        CoordEvent event;
        try {
            event = nlohmann::json::parse(line).get<CoordEvent>();
        } catch (const nlohmann::json::exception& e) {
            throw ReplayError("event log '" + events_path.string() + "' line " +
                              std::to_string(line_no) + ": " + e.what());
        }

        if (event.kind == event_kind::config_preloaded) {
            state.config = event.payload.at("configuration").get<Configuration>();
        } else if (event.kind == event_kind::cf_registered) {
            state.cf_ids.insert(
                event.payload.at("descriptor").at("cf_id").get<std::string>());
        } else if (event.kind == event_kind::config_update) {
            const auto parameter = event.payload.at("parameter").get<std::string>();
            state.config.entries[parameter] = event.payload.at("value").get<double>();
        }
        // every other kind leaves the replayed state untouched
    }
    return state;
}

std::string content_hash_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

void to_json(nlohmann::json& j, const RunArtifact& artifact) {
    j = {{"scenario_hash", artifact.scenario_hash},
         {"seed", artifact.seed},
         {"events_path", artifact.events_path},
         {"result_path", artifact.result_path},
         {"created_at", artifact.created_at}};
}

void from_json(const nlohmann::json& j, RunArtifact& artifact) {
    j.at("scenario_hash").get_to(artifact.scenario_hash);
    j.at("seed").get_to(artifact.seed);
    j.at("events_path").get_to(artifact.events_path);
    j.at("result_path").get_to(artifact.result_path);
    j.at("created_at").get_to(artifact.created_at);
}

void write_artifact(const std::filesystem::path& path, const RunArtifact& artifact) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error("cannot write artifact '" + path.string() + "'");
    out << nlohmann::json(artifact).dump(2) << '\n';
}

RunArtifact read_artifact(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read artifact '" + path.string() + "'");
    nlohmann::json j;
    in >> j;
    return j.get<RunArtifact>();
}

} // namespace cancoord
