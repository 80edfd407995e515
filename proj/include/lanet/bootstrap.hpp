#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lanet/search.hpp"

namespace lanet {

/// Directed arc between named resources, the bootstrap aggregation key.
using NamedArc = std::pair<ResourceId, ResourceId>;

/// Fraction of bootstrap networks containing each directed arc. Strengths
/// lie in [0, 1] and the two directions of a pair sum to at most 1.
struct ArcStrengthTable {
    std::map<NamedArc, double> strength;
    int iterations = 0;

    double get(const ResourceId& src, const ResourceId& tgt) const {
        const auto it = strength.find({src, tgt});
        return it == strength.end() ? 0.0 : it->second;
    }
};

/// The thresholded averaged network: arcs retained in at least
/// threshold * iterations of the bootstrap fits, made acyclic if needed.
struct ConsensusNetwork {
    Dag dag;
    ArcStrengthTable strengths;  // every arc observed at least once
    double threshold = 0.5;
    std::vector<NamedArc> dropped_for_cycles;
};

struct BootstrapOptions {
    int iterations = 100;
    double threshold = 0.5;
    int workers = 1;
    /// Observation hook invoked once per iteration with the fitted network
    /// (possibly from worker threads, in no particular order).
    std::function<void(int iteration, const ScoredNetwork&)> observer;
};

/// Draw N rows uniformly with replacement. The RNG stream is derived solely
/// from (seed, iteration): the same pair always reproduces the same resample
/// and distinct iterations are independent, so any execution order over
/// iterations yields identical results.
EngagementMatrix resample_rows(const EngagementMatrix& matrix, std::uint64_t seed,
                               std::uint64_t iteration);

/// Tabulate directed-arc frequencies over hill-climb fits of
/// options.iterations resamples.
ArcStrengthTable estimate_strengths(const EngagementMatrix& matrix,
                                    const BootstrapOptions& options, const SearchParams& params);

/// Threshold a strength table into a consensus DAG over the given nodes.
/// Retention is inclusive (strength >= threshold). When both directions of a
/// pair pass, the lexicographically smaller (source, target) name pair is
/// kept. If retained arcs still form a cycle, the weakest arc on a cycle
/// (ties: lexicographically smallest) is removed repeatedly and reported in
/// dropped_for_cycles.
ConsensusNetwork build_consensus(const ArcStrengthTable& strengths,
                                 const std::vector<ResourceId>& nodes, double threshold);

/// estimate_strengths + build_consensus. Deterministic for a given
/// (matrix, iterations, threshold, params.seed) regardless of workers.
ConsensusNetwork bootstrap_learn(const EngagementMatrix& matrix, const BootstrapOptions& options,
                                 const SearchParams& params);

/// CSV export: source,target,strength ordered by descending strength, then
/// name pair.
std::string strengths_to_csv(const ArcStrengthTable& table);

/// JSON export of the consensus (dag, strengths, threshold, repairs).
std::string consensus_to_json(const ConsensusNetwork& consensus);
ConsensusNetwork consensus_from_json(const std::string& json_text);

}  // namespace lanet
