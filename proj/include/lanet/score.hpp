#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lanet/dag.hpp"
#include "lanet/matrix.hpp"

namespace lanet {

/// A structure with its BIC score. per_node_scores is parallel to dag.nodes()
/// and sums to score (the score decomposes over node families).
struct ScoredNetwork {
    Dag dag;
    double score = 0.0;
    std::vector<double> per_node_scores;
};

/// BIC for binary variables, computed family by family:
///
///   family(v) = sum_{j,k} N_jk * ln(N_jk / N_j)  -  2^|parents| * ln(N) / 2
///
/// where j ranges over parent configurations, k over {0, 1}, N_j = N_j0 +
/// N_j1, and empty cells follow the 0 * ln 0 = 0 convention. Higher is
/// better. Families are cached by (node, parent set) so repeated scoring
/// during search costs one hash lookup.
class BicScorer {
public:
    /// nodes must all be matrix columns; at most 64 nodes (parent sets are
    /// kept as bitmasks) and the matrix must have at least one student.
    BicScorer(const EngagementMatrix& matrix, std::vector<ResourceId> nodes);

    double family_score(int node, std::uint64_t parent_mask);

    const std::vector<ResourceId>& nodes() const { return nodes_; }
    std::size_t sample_count() const { return rows_; }

    /// Score a whole structure. dag must share this scorer's node list.
    ScoredNetwork score(const Dag& dag);

private:
    double compute_family(int node, std::uint64_t parent_mask) const;

    std::vector<ResourceId> nodes_;
    std::vector<int> columns_;  // matrix column per node
    const std::uint8_t* data_ = nullptr;
    std::size_t stride_ = 0;
    std::size_t rows_ = 0;
    double log_n_ = 0.0;
    std::vector<std::unordered_map<std::uint64_t, double>> cache_;
};

/// Score dag against the matrix (nodes taken from the dag). Throws
/// std::invalid_argument when a dag node is missing from the matrix.
ScoredNetwork bic_score(const EngagementMatrix& matrix, const Dag& dag);

}  // namespace lanet
