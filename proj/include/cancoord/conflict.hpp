#pragma once

#include <compare>
#include <string>
#include <vector>

#include <json.hpp>

#include "cancoord/domain.hpp"

namespace cancoord {

enum class ConflictKind {
    Configuration, // two CFs write the same control parameter
    Measurement,   // one CF's actions influence another CF's objective KPI
    Characteristic // declared logical dependency
};

std::string to_string(ConflictKind kind);
ConflictKind conflict_kind_from_string(const std::string& s);

/// Unordered conflict edge, canonicalized so cf_a < cf_b.
struct ConflictEdge {
    std::string cf_a;
    std::string cf_b;
    ConflictKind kind = ConflictKind::Configuration;
    std::string subject; // shared parameter or influenced KPI; empty for Characteristic

    friend auto operator<=>(const ConflictEdge&, const ConflictEdge&) = default;
};

/// Derives all pairwise conflict edges from the descriptors, deduplicated
/// and sorted by (cf_a, cf_b, kind, subject). A pair may carry edges of
/// several kinds. Throws ValidationError on duplicate cf_ids.
std::vector<ConflictEdge> classify_conflicts(const std::vector<CfDescriptor>& descriptors);

/// Connected components of the conflict graph; CFs without edges form
/// singleton groups. Each group sorted, groups sorted by first member.
std::vector<std::vector<std::string>> conflict_groups(const std::vector<ConflictEdge>& edges,
                                                      const std::vector<CfDescriptor>& descriptors);

void to_json(nlohmann::json& j, const ConflictEdge& edge);
void from_json(const nlohmann::json& j, ConflictEdge& edge);

} // namespace cancoord
