#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cancoord/controller.hpp"

namespace cancoord {

/// Streams CoordEvents to disk as JSON-lines, one canonical object per line.
class EventLogWriter {
  public:
    explicit EventLogWriter(const std::filesystem::path& path);

    void append(const CoordEvent& event);
    void flush();
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// Folds an event log back into the final controller state. Throws
/// ReplayError naming the 1-based line number of the first bad line.
ControllerSnapshot replay(const std::filesystem::path& events_path);

/// FNV-1a 64-bit content hash, hex encoded. Identifies the scenario file a
/// run was produced from.
std::string content_hash_hex(std::string_view bytes);

/// Manifest tying a run's outputs to the scenario that produced them.
struct RunArtifact {
    std::string scenario_hash;
    std::uint64_t seed = 0;
    std::string events_path;
    std::string result_path;
    long created_at = 0; // logical counter, not wall time

    friend bool operator==(const RunArtifact&, const RunArtifact&) = default;
};

void to_json(nlohmann::json& j, const RunArtifact& artifact);
void from_json(const nlohmann::json& j, RunArtifact& artifact);

void write_artifact(const std::filesystem::path& path, const RunArtifact& artifact);
RunArtifact read_artifact(const std::filesystem::path& path);

} // namespace cancoord
