#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lanet/resource.hpp"

namespace lanet {

/// Directed arc between two node indices.
using Arc = std::pair<int, int>;

/// Chapter-tier constraint: arcs may stay within a chapter or point forward,
/// never backward (chapter(source) <= chapter(target)).
inline bool allowed_arc(const ResourceId& source, const ResourceId& target) {
    return source.chapter <= target.chapter;
}

/// Directed graph over an ordered node list. Arc endpoints are indices into
/// nodes(). The type itself allows any arc set; the search and consensus
/// builders only ever produce acyclic, tier-legal graphs.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::vector<ResourceId> nodes) : nodes_(std::move(nodes)) {}

    const std::vector<ResourceId>& nodes() const { return nodes_; }
    const std::set<Arc>& arcs() const { return arcs_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    int index_of(const ResourceId& id) const;

    bool has_arc(int src, int tgt) const { return arcs_.count({src, tgt}) > 0; }
    void add_arc(int src, int tgt);
    void remove_arc(int src, int tgt) { arcs_.erase({src, tgt}); }

    std::vector<int> parents_of(int node) const;
    std::vector<int> children_of(int node) const;

    /// True if a directed path from -> to exists (used for acyclicity checks
    /// on candidate moves: adding u->v is safe iff there is no path v -> u).
    bool has_path(int from, int to) const;

    bool is_acyclic() const;

    /// Topological order; nullopt if cyclic. Stable: among ready nodes the
    /// smallest index comes first.
    std::optional<std::vector<int>> topological_order() const;

    /// Every arc satisfies allowed_arc.
    bool tier_legal() const;

    bool operator==(const Dag&) const = default;

private:
    std::vector<ResourceId> nodes_;
    std::set<Arc> arcs_;
};

/// Enumerate every DAG over the given nodes whose arcs all satisfy
/// allowed_arc, invoking visit exactly once per graph. Guarded to at most 5
/// nodes (the arc powerset explodes beyond that); throws std::invalid_argument
/// above the limit.
void enumerate_dags(const std::vector<ResourceId>& nodes,
                    const std::function<void(const Dag&)>& visit);

/// Convenience wrapper collecting the enumeration.
std::vector<Dag> all_dags(const std::vector<ResourceId>& nodes);

/// JSON round trip: {"nodes": [...], "arcs": [[src, tgt], ...]} with canonical
/// resource names, arcs sorted lexicographically by name pair.
std::string dag_to_json(const Dag& dag);
Dag dag_from_json(const std::string& json_text);

}  // namespace lanet
