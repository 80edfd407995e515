#include "lanet/search.hpp"

#include <algorithm>
#include <stdexcept>

#include "lanet/rng.hpp"

namespace lanet {

namespace {

/// Mutable search state: parent masks plus adjacency for cycle checks.
struct SearchState {
    explicit SearchState(int n)
        : node_count(n), parents(static_cast<std::size_t>(n), 0),
          children(static_cast<std::size_t>(n)), seen_(static_cast<std::size_t>(n), 0) {}

    int node_count;
    std::vector<std::uint64_t> parents;
    std::vector<std::vector<int>> children;

    bool has_arc(int s, int t) const {
        return parents[static_cast<std::size_t>(t)] >> s & 1;
    }

    void add(int s, int t) {
        parents[static_cast<std::size_t>(t)] |= std::uint64_t{1} << s;
        children[static_cast<std::size_t>(s)].push_back(t);
    }

    void remove(int s, int t) {
        parents[static_cast<std::size_t>(t)] &= ~(std::uint64_t{1} << s);
        auto& ch = children[static_cast<std::size_t>(s)];
        ch.erase(std::find(ch.begin(), ch.end(), t));
    }

    /// Directed path from -> to, optionally pretending one arc is absent.
    bool has_path(int from, int to, int skip_src = -1, int skip_tgt = -1) {
        if (from == to) return true;
        std::fill(seen_.begin(), seen_.end(), 0);
        stack_.clear();
        stack_.push_back(from);
        seen_[static_cast<std::size_t>(from)] = 1;
        while (!stack_.empty()) {
            const int u = stack_.back();
            stack_.pop_back();
            for (int v : children[static_cast<std::size_t>(u)]) {
                if (u == skip_src && v == skip_tgt) continue;
                if (v == to) return true;
                if (!seen_[static_cast<std::size_t>(v)]) {
                    seen_[static_cast<std::size_t>(v)] = 1;
                    stack_.push_back(v);
                }
            }
        }
        return false;
    }

    Dag to_dag(const std::vector<ResourceId>& nodes) const {
        Dag dag(nodes);
        for (int t = 0; t < node_count; ++t) {
            for (int s = 0; s < node_count; ++s) {
                if (has_arc(s, t)) dag.add_arc(s, t);
            }
        }
        return dag;
    }

private:
    std::vector<char> seen_;  // DFS scratch
    std::vector<int> stack_;
};

struct Candidate {
    SearchStep::Move move = SearchStep::Move::Add;
    int src = -1;
    int tgt = -1;
    double delta = 0.0;
    bool valid = false;
};

ScoredNetwork run_greedy(BicScorer& scorer, SearchState state, const SearchParams& params,
                         std::vector<SearchStep>* trace) {
    const int n = static_cast<int>(scorer.nodes().size());
    const auto& nodes = scorer.nodes();
    const auto bit = [](int i) { return std::uint64_t{1} << i; };

    std::vector<double> node_scores(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        node_scores[static_cast<std::size_t>(v)] =
            scorer.family_score(v, state.parents[static_cast<std::size_t>(v)]);
        total += node_scores[static_cast<std::size_t>(v)];
    }

    for (int iter = 0; iter < params.max_iters; ++iter) {
        // Candidates are scanned in a fixed order (adds, deletes, reverses,
        // each by source then target index) and an incumbent is replaced only
        // on strictly better delta, so ties resolve deterministically. The
        // acyclicity check runs lazily, only for candidates that would become
        // the incumbent; the selected move is still the best legal one.
        Candidate best;

        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                if (s == t || state.has_arc(s, t)) continue;
                if (!allowed_arc(nodes[static_cast<std::size_t>(s)],
                                 nodes[static_cast<std::size_t>(t)])) {
                    continue;
                }
                const double delta =
                    scorer.family_score(t, state.parents[static_cast<std::size_t>(t)] | bit(s)) -
                    node_scores[static_cast<std::size_t>(t)];
                if (best.valid && delta <= best.delta) continue;
                if (state.has_path(t, s)) continue;  // would close a cycle
                best = Candidate{SearchStep::Move::Add, s, t, delta, true};
            }
        }
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                if (!state.has_arc(s, t)) continue;
                const double delta =
                    scorer.family_score(t, state.parents[static_cast<std::size_t>(t)] & ~bit(s)) -
                    node_scores[static_cast<std::size_t>(t)];
                if (best.valid && delta <= best.delta) continue;
                best = Candidate{SearchStep::Move::Delete, s, t, delta, true};
            }
        }
        for (int s = 0; s < n; ++s) {
            for (int t = 0; t < n; ++t) {
                if (!state.has_arc(s, t)) continue;
                if (!allowed_arc(nodes[static_cast<std::size_t>(t)],
                                 nodes[static_cast<std::size_t>(s)])) {
                    continue;
                }
                const double delta =
                    scorer.family_score(t, state.parents[static_cast<std::size_t>(t)] & ~bit(s)) -
                    node_scores[static_cast<std::size_t>(t)] +
                    scorer.family_score(s, state.parents[static_cast<std::size_t>(s)] | bit(t)) -
                    node_scores[static_cast<std::size_t>(s)];
                if (best.valid && delta <= best.delta) continue;
                // t->s closes a cycle iff a path s ~> t survives without s->t.
                if (state.has_path(s, t, s, t)) continue;
                best = Candidate{SearchStep::Move::Reverse, s, t, delta, true};
            }
        }

        if (!best.valid || best.delta <= params.epsilon) break;

        switch (best.move) {
            case SearchStep::Move::Add:
                state.add(best.src, best.tgt);
                break;
            case SearchStep::Move::Delete:
                state.remove(best.src, best.tgt);
                break;
            case SearchStep::Move::Reverse:
                state.remove(best.src, best.tgt);
                state.add(best.tgt, best.src);
                break;
        }
        for (int v : {best.src, best.tgt}) {
            const double updated =
                scorer.family_score(v, state.parents[static_cast<std::size_t>(v)]);
            total += updated - node_scores[static_cast<std::size_t>(v)];
            node_scores[static_cast<std::size_t>(v)] = updated;
        }
        if (trace) {
            trace->push_back(SearchStep{best.move, best.src, best.tgt, best.delta, total});
        }
    }

    ScoredNetwork result;
    result.dag = state.to_dag(nodes);
    result.per_node_scores = std::move(node_scores);
    result.score = 0.0;
    for (double s : result.per_node_scores) result.score += s;
    return result;
}

}  // namespace

ScoredNetwork hill_climb_with_scorer(BicScorer& scorer, const SearchParams& params,
                                     std::vector<SearchStep>* trace) {
    const int n = static_cast<int>(scorer.nodes().size());
    if (n < 2) throw std::invalid_argument("hill_climb needs at least 2 resources");
    if (params.epsilon <= 0) throw std::invalid_argument("epsilon must be > 0");

    ScoredNetwork best;
    std::vector<SearchStep> best_trace;
    for (int run = 0; run <= params.restarts; ++run) {
        SearchState state(n);
        if (run > 0) {
            // Perturb with up to n random legal additions.
            Rng rng = derive_stream(params.seed, static_cast<std::uint64_t>(run));
            for (int i = 0; i < n; ++i) {
                const int s = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                const int t = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                if (s == t || state.has_arc(s, t)) continue;
                if (!allowed_arc(scorer.nodes()[static_cast<std::size_t>(s)],
                                 scorer.nodes()[static_cast<std::size_t>(t)])) {
                    continue;
                }
                if (state.has_path(t, s)) continue;
                state.add(s, t);
            }
        }
        std::vector<SearchStep> run_trace;
        ScoredNetwork result =
            run_greedy(scorer, std::move(state), params, trace ? &run_trace : nullptr);
        if (run == 0 || result.score > best.score) {
            best = std::move(result);
            best_trace = std::move(run_trace);
        }
    }
    if (trace) *trace = std::move(best_trace);
    return best;
}

ScoredNetwork hill_climb(const EngagementMatrix& matrix, const SearchParams& params,
                         std::vector<SearchStep>* trace) {
    BicScorer scorer(matrix, matrix.resources());
    return hill_climb_with_scorer(scorer, params, trace);
}

ScoredNetwork exhaustive_best(const EngagementMatrix& matrix,
                              const std::vector<ResourceId>& nodes) {
    if (nodes.size() > 5) {
        throw std::invalid_argument("exhaustive_best supports at most 5 nodes");
    }
    BicScorer scorer(matrix, nodes);

    bool have_best = false;
    ScoredNetwork best;
    std::vector<Arc> best_arcs;
    enumerate_dags(nodes, [&](const Dag& dag) {
        ScoredNetwork scored = scorer.score(dag);
        std::vector<Arc> arcs(dag.arcs().begin(), dag.arcs().end());
        const bool better =
            !have_best || scored.score > best.score ||
            (scored.score == best.score &&
             (arcs.size() < best_arcs.size() ||
              (arcs.size() == best_arcs.size() && arcs < best_arcs)));
        if (better) {
            best = std::move(scored);
            best_arcs = std::move(arcs);
            have_best = true;
        }
    });
    return best;
}

}  // namespace lanet
