#include "lanet/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "lanet/errors.hpp"
#include "lanet/rng.hpp"

namespace lanet {

using nlohmann::json;

EngagementMatrix resample_rows(const EngagementMatrix& matrix, std::uint64_t seed,
                               std::uint64_t iteration) {
    const std::size_t n = matrix.student_count();
    if (n == 0) throw InputError("cannot resample an empty matrix");

    Rng rng = derive_stream(seed, iteration);
    std::vector<std::size_t> picks(n);
    for (auto& p : picks) p = rng.next_below(n);

    // Rows need fresh unique sorted ids; a draw-ordinal suffix keeps
    // duplicates apart and a final sort restores the row invariant. The ids
    // are never consumed downstream, only the cells are.
    std::vector<std::pair<std::string, std::size_t>> rows;
    rows.reserve(n);
    char suffix[24];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(suffix, sizeof(suffix), "#%04zu", i);
        rows.emplace_back(matrix.students()[picks[i]] + suffix, picks[i]);
    }
    std::sort(rows.begin(), rows.end());

    std::vector<std::string> students;
    std::vector<std::uint8_t> cells;
    students.reserve(n);
    cells.reserve(n * matrix.resource_count());
    for (auto& [id, pick] : rows) {
        students.push_back(std::move(id));
        const std::uint8_t* row = matrix.row(pick);
        cells.insert(cells.end(), row, row + matrix.resource_count());
    }
    return EngagementMatrix(std::move(students), matrix.resources(), std::move(cells));
}

ArcStrengthTable estimate_strengths(const EngagementMatrix& matrix,
                                    const BootstrapOptions& options, const SearchParams& params) {
    if (options.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
    const int workers = std::max(1, options.workers);

    std::map<Arc, int> counts;  // over matrix resource indices
    std::mutex merge_mutex;
    std::atomic<int> next{0};

    const auto worker = [&] {
        std::map<Arc, int> local;
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= options.iterations) break;
            const EngagementMatrix resample =
                resample_rows(matrix, params.seed, static_cast<std::uint64_t>(i));
            SearchParams fit = params;
            fit.seed = mix64(params.seed) ^ static_cast<std::uint64_t>(i);
            const ScoredNetwork net = hill_climb(resample, fit);
            for (const auto& arc : net.dag.arcs()) ++local[arc];
            if (options.observer) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                options.observer(i, net);
            }
        }
        std::lock_guard<std::mutex> lock(merge_mutex);
        for (const auto& [arc, n] : local) counts[arc] += n;
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ArcStrengthTable table;
    table.iterations = options.iterations;
    for (const auto& [arc, n] : counts) {
        const auto& src = matrix.resources()[static_cast<std::size_t>(arc.first)];
        const auto& tgt = matrix.resources()[static_cast<std::size_t>(arc.second)];
        table.strength[{src, tgt}] =
            static_cast<double>(n) / static_cast<double>(options.iterations);
    }
    return table;
}

namespace {

/// Arcs lying on some cycle: both endpoints share a strongly connected
/// component of size >= 2. Tarjan over the retained arc set.
std::vector<NamedArc> arcs_on_cycles(const std::vector<ResourceId>& nodes,
                                     const std::set<Arc>& arcs) {
    const int n = static_cast<int>(nodes.size());
    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
    for (const auto& [s, t] : arcs) adjacency[static_cast<std::size_t>(s)].push_back(t);

    std::vector<int> component(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0), num(static_cast<std::size_t>(n), -1);
    std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    int counter = 0, comp_count = 0;
    std::vector<int> comp_size;

    // Iterative Tarjan to avoid recursion depth concerns.
    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (num[static_cast<std::size_t>(root)] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        num[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = counter++;
        stack.push_back(root);
        on_stack[static_cast<std::size_t>(root)] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& edges = adjacency[static_cast<std::size_t>(f.v)];
            if (f.edge < edges.size()) {
                const int w = edges[f.edge++];
                if (num[static_cast<std::size_t>(w)] == -1) {
                    num[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] =
                        counter++;
                    stack.push_back(w);
                    on_stack[static_cast<std::size_t>(w)] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[static_cast<std::size_t>(w)]) {
                    low[static_cast<std::size_t>(f.v)] =
                        std::min(low[static_cast<std::size_t>(f.v)],
                                 num[static_cast<std::size_t>(w)]);
                }
            } else {
                if (low[static_cast<std::size_t>(f.v)] == num[static_cast<std::size_t>(f.v)]) {
                    int size = 0;
                    for (;;) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[static_cast<std::size_t>(w)] = 0;
                        component[static_cast<std::size_t>(w)] = comp_count;
                        ++size;
                        if (w == f.v) break;
                    }
                    comp_size.push_back(size);
                    ++comp_count;
                }
                const int v = f.v;
                frames.pop_back();
                if (!frames.empty()) {
                    const int parent = frames.back().v;
                    low[static_cast<std::size_t>(parent)] =
                        std::min(low[static_cast<std::size_t>(parent)],
                                 low[static_cast<std::size_t>(v)]);
                }
            }
        }
    }

    std::vector<NamedArc> cyclic;
    for (const auto& [s, t] : arcs) {
        const int cs = component[static_cast<std::size_t>(s)];
        if (cs == component[static_cast<std::size_t>(t)] &&
            comp_size[static_cast<std::size_t>(cs)] >= 2) {
            cyclic.emplace_back(nodes[static_cast<std::size_t>(s)],
                                nodes[static_cast<std::size_t>(t)]);
        }
    }
    return cyclic;
}

std::pair<std::string, std::string> arc_names(const NamedArc& arc) {
    return {arc.first.name(), arc.second.name()};
}

}  // namespace

ConsensusNetwork build_consensus(const ArcStrengthTable& strengths,
                                 const std::vector<ResourceId>& nodes, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must be in (0, 1]");
    }
    ConsensusNetwork out;
    out.strengths = strengths;
    out.threshold = threshold;

    std::vector<NamedArc> retained;
    for (const auto& [arc, strength] : strengths.strength) {
        if (strength < threshold) continue;
        const double opposite = strengths.get(arc.second, arc.first);
        if (opposite >= threshold) {
            // Both directions pass; keep the lexicographically smaller pair.
            const NamedArc reversed{arc.second, arc.first};
            if (arc_names(reversed) < arc_names(arc)) continue;
        }
        retained.push_back(arc);
    }

    Dag dag(nodes);
    std::set<Arc> arcs;
    for (const auto& [src, tgt] : retained) {
        const int s = dag.index_of(src);
        const int t = dag.index_of(tgt);
        if (s < 0 || t < 0) throw std::invalid_argument("strength table names unknown node");
        arcs.insert({s, t});
    }

    for (;;) {
        auto cyclic = arcs_on_cycles(nodes, arcs);
        if (cyclic.empty()) break;
        const auto weakest = std::min_element(
            cyclic.begin(), cyclic.end(), [&](const NamedArc& a, const NamedArc& b) {
                const double sa = strengths.get(a.first, a.second);
                const double sb = strengths.get(b.first, b.second);
                if (sa != sb) return sa < sb;
                return arc_names(a) < arc_names(b);
            });
        arcs.erase({dag.index_of(weakest->first), dag.index_of(weakest->second)});
        out.dropped_for_cycles.push_back(*weakest);
    }

    for (const auto& [s, t] : arcs) dag.add_arc(s, t);
    out.dag = std::move(dag);
    return out;
}

ConsensusNetwork bootstrap_learn(const EngagementMatrix& matrix, const BootstrapOptions& options,
                                 const SearchParams& params) {
    if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
        throw std::invalid_argument("threshold must be in (0, 1]");
    }
    const ArcStrengthTable table = estimate_strengths(matrix, options, params);
    return build_consensus(table, matrix.resources(), options.threshold);
}

std::string strengths_to_csv(const ArcStrengthTable& table) {
    std::vector<std::pair<NamedArc, double>> rows(table.strength.begin(), table.strength.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return arc_names(a.first) < arc_names(b.first);
    });
    std::string out = "source,target,strength\n";
    char buf[64];
    for (const auto& [arc, strength] : rows) {
        std::snprintf(buf, sizeof(buf), "%.4f", strength);
        out += arc.first.name() + "," + arc.second.name() + "," + buf + "\n";
    }
    return out;
}

std::string consensus_to_json(const ConsensusNetwork& consensus) {
    json doc;
    doc["threshold"] = consensus.threshold;
    doc["iterations"] = consensus.strengths.iterations;
    doc["nodes"] = json::array();
    for (const auto& node : consensus.dag.nodes()) doc["nodes"].push_back(node.name());

    std::vector<std::pair<std::string, std::string>> arcs;
    for (const auto& [s, t] : consensus.dag.arcs()) {
        arcs.emplace_back(consensus.dag.nodes()[static_cast<std::size_t>(s)].name(),
                          consensus.dag.nodes()[static_cast<std::size_t>(t)].name());
    }
    std::sort(arcs.begin(), arcs.end());
    doc["arcs"] = json::array();
    for (const auto& [s, t] : arcs) {
        const double strength =
            consensus.strengths.get(*ResourceId::parse(s), *ResourceId::parse(t));
        doc["arcs"].push_back({{"source", s}, {"target", t}, {"strength", strength}});
    }

    doc["strengths"] = json::array();
    for (const auto& [arc, strength] : consensus.strengths.strength) {
        doc["strengths"].push_back({{"source", arc.first.name()},
                                    {"target", arc.second.name()},
                                    {"strength", strength}});
    }
    doc["dropped_for_cycles"] = json::array();
    for (const auto& [src, tgt] : consensus.dropped_for_cycles) {
        doc["dropped_for_cycles"].push_back({src.name(), tgt.name()});
    }
    return doc.dump(2) + "\n";
}

ConsensusNetwork consensus_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("consensus: malformed JSON: ") + e.what());
    }
    ConsensusNetwork out;
    out.threshold = doc.at("threshold").get<double>();
    out.strengths.iterations = doc.at("iterations").get<int>();
    std::vector<ResourceId> nodes;
    for (const auto& name : doc.at("nodes")) {
        auto id = ResourceId::parse(name.get<std::string>());
        if (!id) throw InputError("consensus: bad node name");
        nodes.push_back(*id);
    }
    Dag dag(std::move(nodes));
    for (const auto& arc : doc.at("arcs")) {
        auto src = ResourceId::parse(arc.at("source").get<std::string>());
        auto tgt = ResourceId::parse(arc.at("target").get<std::string>());
        if (!src || !tgt) throw InputError("consensus: bad arc name");
        const int s = dag.index_of(*src);
        const int t = dag.index_of(*tgt);
        if (s < 0 || t < 0) throw InputError("consensus: arc references unknown node");
        dag.add_arc(s, t);
    }
    out.dag = std::move(dag);
    if (doc.contains("strengths")) {
        for (const auto& entry : doc["strengths"]) {
            auto src = ResourceId::parse(entry.at("source").get<std::string>());
            auto tgt = ResourceId::parse(entry.at("target").get<std::string>());
            if (!src || !tgt) throw InputError("consensus: bad strength entry");
            out.strengths.strength[{*src, *tgt}] = entry.at("strength").get<double>();
        }
    }
    if (doc.contains("dropped_for_cycles")) {
        for (const auto& entry : doc["dropped_for_cycles"]) {
            auto src = ResourceId::parse(entry.at(0).get<std::string>());
            auto tgt = ResourceId::parse(entry.at(1).get<std::string>());
            if (!src || !tgt) throw InputError("consensus: bad dropped arc");
            out.dropped_for_cycles.emplace_back(*src, *tgt);
        }
    }
    return out;
}

}  // namespace lanet
