#include "lanet/cpt.hpp"

#include <algorithm>
#include <stdexcept>

namespace lanet {

CptSet fit_cpts(const EngagementMatrix& matrix, const Dag& dag, double alpha) {
    if (alpha < 0) throw std::invalid_argument("alpha must be >= 0");
    std::vector<int> columns;
    columns.reserve(dag.node_count());
    for (const auto& node : dag.nodes()) {
        const int col = matrix.column_of(node);
        if (col < 0) throw std::invalid_argument("node " + node.name() + " not in matrix");
        columns.push_back(col);
    }

    CptSet set;
    set.alpha = alpha;
    set.per_node.resize(dag.node_count());
    for (std::size_t v = 0; v < dag.node_count(); ++v) {
        NodeCpt& cpt = set.per_node[v];
        cpt.parents = dag.parents_of(static_cast<int>(v));
        std::sort(cpt.parents.begin(), cpt.parents.end());
        const std::size_t configs = std::size_t{1} << cpt.parents.size();
        std::vector<std::uint32_t> ones(configs, 0), totals(configs, 0);
        for (std::size_t r = 0; r < matrix.student_count(); ++r) {
            const std::uint8_t* row = matrix.row(r);
            std::size_t cfg = 0;
            for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
                cfg |= static_cast<std::size_t>(
                           row[columns[static_cast<std::size_t>(cpt.parents[i])]])
                       << i;
            }
            ++totals[cfg];
            ones[cfg] += row[columns[v]];
        }
        cpt.p_one.resize(configs);
        cpt.unseen.assign(configs, 0);
        for (std::size_t cfg = 0; cfg < configs; ++cfg) {
            if (totals[cfg] == 0 && alpha == 0.0) {
                cpt.p_one[cfg] = 0.5;
                cpt.unseen[cfg] = 1;
            } else {
                cpt.p_one[cfg] = (static_cast<double>(ones[cfg]) + alpha) /
                                 (static_cast<double>(totals[cfg]) + 2.0 * alpha);
            }
        }
    }
    return set;
}

}  // namespace lanet
