#include "lanet/infer.hpp"

#include <algorithm>
#include <cctype>

#include "lanet/errors.hpp"

namespace lanet {

std::string Query::to_string() const {
    std::string out = "P(" + target.name() + "=" + std::to_string(target_value);
    if (!evidence.empty()) {
        out += " | ";
        bool first = true;
        for (const auto& [id, value] : evidence) {
            if (!first) out += ", ";
            out += id.name() + "=" + std::to_string(value);
            first = false;
        }
    }
    return out + ")";
}

namespace {

struct Assignment {
    ResourceId id;
    int value;
};

Assignment parse_assignment(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        throw QueryError("query: expected <resource>=<0|1>, got \"" + std::string(text) + "\"");
    }
    const auto id = ResourceId::parse(text.substr(0, eq));
    if (!id) {
        throw QueryError("query: bad resource name \"" + std::string(text.substr(0, eq)) + "\"");
    }
    const std::string_view value = text.substr(eq + 1);
    if (value != "0" && value != "1") {
        throw QueryError("query: value must be 0 or 1, got \"" + std::string(value) + "\"");
    }
    return {*id, value == "1" ? 1 : 0};
}

}  // namespace

Query parse_query(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.size() < 4 || (s[0] != 'P' && s[0] != 'p') || s[1] != '(' || s.back() != ')') {
        throw QueryError("query: expected P(<target>=<v> | <evidence>, ...), got \"" + text +
                         "\"");
    }
    const std::string_view body = std::string_view(s).substr(2, s.size() - 3);
    const auto bar = body.find('|');

    Query query;
    const Assignment target = parse_assignment(body.substr(0, bar));
    query.target = target.id;
    query.target_value = target.value;

    if (bar != std::string_view::npos) {
        std::string_view rest = body.substr(bar + 1);
        if (rest.empty()) throw QueryError("query: empty evidence after '|'");
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view piece = rest.substr(0, comma);
            const Assignment a = parse_assignment(piece);
            if (a.id == query.target) {
                throw QueryError("query: target " + a.id.name() + " cannot also be evidence");
            }
            if (!query.evidence.emplace(a.id, a.value).second) {
                throw QueryError("query: duplicate evidence for " + a.id.name());
            }
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }
    return query;
}

double model_query(const Dag& dag, const CptSet& cpts, const Query& query) {
    if (query.evidence.count(query.target)) {
        throw QueryError("query: target " + query.target.name() + " cannot also be evidence");
    }
    const int target = dag.index_of(query.target);
    if (target < 0) throw QueryError("query: " + query.target.name() + " is not a model node");
    std::map<int, int> evidence;
    for (const auto& [id, value] : query.evidence) {
        const int node = dag.index_of(id);
        if (node < 0) throw QueryError("query: " + id.name() + " is not a model node");
        evidence[node] = value;
    }

    // Ancestral closure of target + evidence; everything else marginalizes
    // out of the sum, so it is skipped entirely.
    std::vector<char> relevant(dag.node_count(), 0);
    std::vector<int> stack{target};
    for (const auto& [node, value] : evidence) stack.push_back(node);
    for (int v : stack) relevant[static_cast<std::size_t>(v)] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (std::size_t i = 0; i < cpts.per_node[static_cast<std::size_t>(v)].parents.size();
             ++i) {
            const int p = cpts.per_node[static_cast<std::size_t>(v)].parents[i];
            if (!relevant[static_cast<std::size_t>(p)]) {
                relevant[static_cast<std::size_t>(p)] = 1;
                stack.push_back(p);
            }
        }
    }
    std::vector<int> scope;
    for (std::size_t v = 0; v < dag.node_count(); ++v) {
        if (relevant[v]) scope.push_back(static_cast<int>(v));
    }
    if (scope.size() > 25) {
        throw QueryError("query: relevant subgraph has " + std::to_string(scope.size()) +
                         " variables; enumeration is capped at 25");
    }

    std::vector<int> position(dag.node_count(), -1);
    for (std::size_t i = 0; i < scope.size(); ++i) {
        position[static_cast<std::size_t>(scope[i])] = static_cast<int>(i);
    }

    double evidence_mass = 0.0;
    double joint_mass = 0.0;
    const std::uint64_t total = std::uint64_t{1} << scope.size();
    for (std::uint64_t assignment = 0; assignment < total; ++assignment) {
        const auto value_of = [&](int node) {
            return static_cast<int>(assignment >> position[static_cast<std::size_t>(node)] & 1);
        };
        bool consistent = true;
        for (const auto& [node, value] : evidence) {
            if (value_of(node) != value) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;

        double p = 1.0;
        for (int v : scope) {
            const NodeCpt& cpt = cpts.per_node[static_cast<std::size_t>(v)];
            std::size_t cfg = 0;
            for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
                cfg |= static_cast<std::size_t>(value_of(cpt.parents[i])) << i;
            }
            const double p1 = cpt.p_one[cfg];
            p *= value_of(v) ? p1 : 1.0 - p1;
        }
        evidence_mass += p;
        if (value_of(target) == query.target_value) joint_mass += p;
    }

    if (evidence_mass <= 0.0) {
        throw QueryError("query: evidence has probability zero under the model");
    }
    return joint_mass / evidence_mass;
}

EmpiricalResult empirical_conditional(const EngagementMatrix& matrix, const Query& query) {
    if (query.evidence.count(query.target)) {
        throw QueryError("query: target " + query.target.name() + " cannot also be evidence");
    }
    const int target_col = matrix.column_of(query.target);
    if (target_col < 0) {
        throw QueryError("query: " + query.target.name() + " is not a matrix column");
    }
    std::vector<std::pair<int, int>> evidence_cols;
    for (const auto& [id, value] : query.evidence) {
        const int col = matrix.column_of(id);
        if (col < 0) throw QueryError("query: " + id.name() + " is not a matrix column");
        evidence_cols.emplace_back(col, value);
    }

    std::size_t support = 0, hits = 0;
    for (std::size_t r = 0; r < matrix.student_count(); ++r) {
        const std::uint8_t* row = matrix.row(r);
        bool match = true;
        for (const auto& [col, value] : evidence_cols) {
            if (row[col] != value) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        ++support;
        if (row[target_col] == query.target_value) ++hits;
    }
    if (support == 0) throw QueryError("query: no student matches the evidence");
    return {static_cast<double>(hits) / static_cast<double>(support), support};
}

}  // namespace lanet
