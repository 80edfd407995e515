#pragma once

#include <cstdint>
#include <vector>

#include "lanet/score.hpp"

namespace lanet {

struct SearchParams {
    double epsilon = 1e-9;  // minimum score improvement to accept a move
    int max_iters = 10000;
    int restarts = 0;  // extra randomly perturbed starts beyond the plain one
    std::uint64_t seed = 0;
};

/// One accepted move, for tests that inspect the search path.
struct SearchStep {
    enum class Move { Add, Delete, Reverse };
    Move move;
    int src;
    int tgt;
    double delta;
    double total_after;
};

/// Greedy hill climbing from the empty graph over all matrix resources.
///
/// Each iteration evaluates every legal move among {add, delete, reverse};
/// legality is acyclicity plus the chapter-tier constraint on the resulting
/// arc (a reverse is legal only when the reversed arc is itself tier-legal).
/// The single best move is applied if it improves the total score by more
/// than epsilon. Candidates are enumerated in a fixed order (adds, then
/// deletes, then reverses, each by (source, target) node index) and a later
/// candidate replaces the incumbent only on strict improvement, which makes
/// tie-breaking deterministic.
///
/// With restarts > 0, each restart seeds the empty graph with random legal
/// arc additions drawn from a stream derived from (seed, restart index); the
/// best-scoring final network across all runs wins, earlier runs keeping
/// ties. Identical (matrix, params) always produce identical results.
ScoredNetwork hill_climb(const EngagementMatrix& matrix, const SearchParams& params,
                         std::vector<SearchStep>* trace = nullptr);

/// Same, but sharing a caller-provided scorer (the bootstrap cannot use this:
/// each resample is a different matrix; it exists so exhaustive comparisons
/// reuse cached family scores).
ScoredNetwork hill_climb_with_scorer(BicScorer& scorer, const SearchParams& params,
                                     std::vector<SearchStep>* trace = nullptr);

/// Globally optimal network over the given nodes by exhaustive enumeration
/// (at most 5 nodes). Ties go to fewer arcs, then the lexicographically
/// smaller arc list. Serves as the oracle the hill climber is validated
/// against.
ScoredNetwork exhaustive_best(const EngagementMatrix& matrix,
                              const std::vector<ResourceId>& nodes);

}  // namespace lanet
