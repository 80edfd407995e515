#pragma once

#include <cstdint>
#include <vector>

#include "lanet/dag.hpp"
#include "lanet/matrix.hpp"

namespace lanet {

/// Conditional probability table for one node. Parents are node indices in
/// ascending order; a parent configuration is encoded with bit i holding the
/// value of parents[i]. p_one[cfg] = P(node = 1 | configuration), and
/// P(node = 0 | cfg) is exactly 1 - p_one[cfg].
struct NodeCpt {
    std::vector<int> parents;
    std::vector<double> p_one;          // size 2^parents.size()
    std::vector<std::uint8_t> unseen;   // rows with no observations (alpha = 0 gives 0.5)

    std::size_t config_count() const { return p_one.size(); }
};

/// One table per dag node, plus the smoothing used to fit them.
struct CptSet {
    std::vector<NodeCpt> per_node;
    double alpha = 1.0;
};

/// Fit tables by counting: P(v=1 | cfg) = (N_cfg,1 + alpha) / (N_cfg + 2 alpha).
/// alpha = 0 is plain maximum likelihood, with unseen configurations set to
/// 0.5 and flagged. Throws std::invalid_argument if dag nodes are missing
/// from the matrix or alpha < 0.
CptSet fit_cpts(const EngagementMatrix& matrix, const Dag& dag, double alpha);

}  // namespace lanet
