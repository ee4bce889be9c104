#include "cancoord/conflict.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cancoord {

std::string to_string(ConflictKind kind) {
    switch (kind) {
    case ConflictKind::Configuration: return "Configuration";
    case ConflictKind::Measurement: return "Measurement";
    case ConflictKind::Characteristic: return "Characteristic";
    }
    throw ValidationError("unknown conflict kind");
}

ConflictKind conflict_kind_from_string(const std::string& s) {
    if (s == "Configuration") return ConflictKind::Configuration;
    if (s == "Measurement") return ConflictKind::Measurement;
    if (s == "Characteristic") return ConflictKind::Characteristic;
    throw ValidationError("unknown conflict kind '" + s + "'");
}

namespace {

ConflictEdge make_edge(const std::string& a, const std::string& b, ConflictKind kind,
                       std::string subject) {
    ConflictEdge edge;
    edge.cf_a = std::min(a, b);
    edge.cf_b = std::max(a, b);
    edge.kind = kind;
    edge.subject = std::move(subject);
    return edge;
}

void require_unique_ids(const std::vector<CfDescriptor>& descriptors) {
    std::set<std::string> ids;
    for (const auto& d : descriptors) {
        validate(d);
        if (!ids.insert(d.cf_id).second)
            throw ValidationError("duplicate cf_id '" + d.cf_id + "'");
    }
}

} // namespace

std::vector<ConflictEdge> classify_conflicts(const std::vector<CfDescriptor>& descriptors) {
    require_unique_ids(descriptors);

    std::set<ConflictEdge> edges;
    for (std::size_t i = 0; i < descriptors.size(); ++i) {
        for (std::size_t k = i + 1; k < descriptors.size(); ++k) {
            const CfDescriptor& a = descriptors[i];
            const CfDescriptor& b = descriptors[k];

            for (const auto& param : a.params_written)
                if (b.params_written.count(param))
                    edges.insert(make_edge(a.cf_id, b.cf_id, ConflictKind::Configuration, param));

            if (a.kpis_influenced.count(b.objective_kpi))
                edges.insert(
                    make_edge(a.cf_id, b.cf_id, ConflictKind::Measurement, b.objective_kpi));
            if (b.kpis_influenced.count(a.objective_kpi))
                edges.insert(
                    make_edge(a.cf_id, b.cf_id, ConflictKind::Measurement, a.objective_kpi));

            if (a.depends_on.count(b.cf_id) || b.depends_on.count(a.cf_id))
                edges.insert(make_edge(a.cf_id, b.cf_id, ConflictKind::Characteristic, ""));
        }
    }
    return {edges.begin(), edges.end()};
}

std::vector<std::vector<std::string>> conflict_groups(const std::vector<ConflictEdge>& edges,
                                                      const std::vector<CfDescriptor>& descriptors) {
    require_unique_ids(descriptors);

    std::map<std::string, std::string> parent;
    for (const auto& d : descriptors)
        parent[d.cf_id] = d.cf_id;

    auto find = [&parent](std::string id) {
        while (parent.at(id) != id)
            id = parent.at(id);
        return id;
    };

    for (const auto& edge : edges) {
        if (!parent.count(edge.cf_a) || !parent.count(edge.cf_b))
            throw ValidationError("conflict edge references unknown cf_id");
        parent[find(edge.cf_a)] = find(edge.cf_b);
    }

    std::map<std::string, std::set<std::string>> components;
    for (const auto& [id, _] : parent)
        components[find(id)].insert(id);

    std::vector<std::vector<std::string>> groups;
    groups.reserve(components.size());
    for (const auto& [_, members] : components)
        groups.emplace_back(members.begin(), members.end());
    std::sort(groups.begin(), groups.end());
    return groups;
}

void to_json(nlohmann::json& j, const ConflictEdge& edge) {
    j = {{"cf_a", edge.cf_a},
         {"cf_b", edge.cf_b},
         {"kind", to_string(edge.kind)},
         {"subject", edge.subject}};
}

void from_json(const nlohmann::json& j, ConflictEdge& edge) {
    j.at("cf_a").get_to(edge.cf_a);
    j.at("cf_b").get_to(edge.cf_b);
    edge.kind = conflict_kind_from_string(j.at("kind").get<std::string>());
    j.at("subject").get_to(edge.subject);
}

} // namespace cancoord
