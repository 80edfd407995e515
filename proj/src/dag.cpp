#include "lanet/dag.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "lanet/errors.hpp"

namespace lanet {

using nlohmann::json;

int Dag::index_of(const ResourceId& id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i] == id) return static_cast<int>(i);
    }
    return -1;
}

void Dag::add_arc(int src, int tgt) {
    if (src == tgt) throw std::invalid_argument("self-arcs are not allowed");
    arcs_.insert({src, tgt});
}

std::vector<int> Dag::parents_of(int node) const {
    std::vector<int> parents;
    for (const auto& [src, tgt] : arcs_) {
        if (tgt == node) parents.push_back(src);
    }
    return parents;
}

std::vector<int> Dag::children_of(int node) const {
    std::vector<int> children;
    for (const auto& [src, tgt] : arcs_) {
        if (src == node) children.push_back(tgt);
    }
    return children;
}

bool Dag::has_path(int from, int to) const {
    if (from == to) return true;
    std::vector<std::vector<int>> adjacency(nodes_.size());
    for (const auto& [src, tgt] : arcs_) adjacency[static_cast<std::size_t>(src)].push_back(tgt);
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v : adjacency[static_cast<std::size_t>(u)]) {
            if (v == to) return true;
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                stack.push_back(v);
            }
        }
    }
    return false;
}

std::optional<std::vector<int>> Dag::topological_order() const {
    const std::size_t n = nodes_.size();
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> adjacency(n);
    for (const auto& [src, tgt] : arcs_) {
        adjacency[static_cast<std::size_t>(src)].push_back(tgt);
        ++indegree[static_cast<std::size_t>(tgt)];
    }
    // Kahn's algorithm with an ordered ready set for a stable result.
    std::set<int> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.insert(static_cast<int>(i));
    }
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int u = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(u);
        for (int v : adjacency[static_cast<std::size_t>(u)]) {
            if (--indegree[static_cast<std::size_t>(v)] == 0) ready.insert(v);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

bool Dag::is_acyclic() const { return topological_order().has_value(); }

bool Dag::tier_legal() const {
    for (const auto& [src, tgt] : arcs_) {
        if (!allowed_arc(nodes_[static_cast<std::size_t>(src)],
                         nodes_[static_cast<std::size_t>(tgt)])) {
            return false;
        }
    }
    return true;
}

void enumerate_dags(const std::vector<ResourceId>& nodes,
                    const std::function<void(const Dag&)>& visit) {
    if (nodes.size() > 5) {
        throw std::invalid_argument("enumerate_dags supports at most 5 nodes");
    }
    std::vector<Arc> candidates;
    const int n = static_cast<int>(nodes.size());
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s != t && allowed_arc(nodes[static_cast<std::size_t>(s)],
                                      nodes[static_cast<std::size_t>(t)])) {
                candidates.push_back({s, t});
            }
        }
    }
    const std::size_t m = candidates.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        Dag dag(nodes);
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1) dag.add_arc(candidates[i].first, candidates[i].second);
        }
        if (dag.is_acyclic()) visit(dag);
    }
}

std::vector<Dag> all_dags(const std::vector<ResourceId>& nodes) {
    std::vector<Dag> out;
    enumerate_dags(nodes, [&](const Dag& d) { out.push_back(d); });
    return out;
}

std::string dag_to_json(const Dag& dag) {
    json doc;
    doc["nodes"] = json::array();
    for (const auto& node : dag.nodes()) doc["nodes"].push_back(node.name());
    std::vector<std::pair<std::string, std::string>> arcs;
    for (const auto& [src, tgt] : dag.arcs()) {
        arcs.emplace_back(dag.nodes()[static_cast<std::size_t>(src)].name(),
                          dag.nodes()[static_cast<std::size_t>(tgt)].name());
    }
    std::sort(arcs.begin(), arcs.end());
    doc["arcs"] = json::array();
    for (const auto& [src, tgt] : arcs) doc["arcs"].push_back({src, tgt});
    return doc.dump(2) + "\n";
}

Dag dag_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("dag: malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
        throw InputError("dag: expected object with \"nodes\" array");
    }
    std::vector<ResourceId> nodes;
    for (const auto& name : doc["nodes"]) {
        auto id = ResourceId::parse(name.get<std::string>());
        if (!id) throw InputError("dag: bad node name \"" + name.get<std::string>() + "\"");
        nodes.push_back(*id);
    }
    Dag dag(std::move(nodes));
    if (doc.contains("arcs")) {
        for (const auto& arc : doc["arcs"]) {
            if (!arc.is_array() || arc.size() != 2) throw InputError("dag: arcs must be pairs");
            auto src = ResourceId::parse(arc[0].get<std::string>());
            auto tgt = ResourceId::parse(arc[1].get<std::string>());
            if (!src || !tgt) throw InputError("dag: bad arc endpoint name");
            const int s = dag.index_of(*src);
            const int t = dag.index_of(*tgt);
            if (s < 0 || t < 0) throw InputError("dag: arc references unknown node");
            dag.add_arc(s, t);
        }
    }
    return dag;
}

}  // namespace lanet
