#include "lanet/score.hpp"

#include <cmath>
#include <stdexcept>

namespace lanet {

namespace {
constexpr int kMaxParents = 22;  // 2^22 count cells; far beyond any sane family
}

BicScorer::BicScorer(const EngagementMatrix& matrix, std::vector<ResourceId> nodes)
    : nodes_(std::move(nodes)) {
    if (nodes_.size() > 64) {
        throw std::invalid_argument("scorer supports at most 64 nodes");
    }
    if (matrix.student_count() == 0) {
        throw std::invalid_argument("cannot score against an empty matrix");
    }
    columns_.reserve(nodes_.size());
    for (const auto& node : nodes_) {
        const int col = matrix.column_of(node);
        if (col < 0) {
            throw std::invalid_argument("node " + node.name() + " is not a matrix column");
        }
        columns_.push_back(col);
    }
    data_ = matrix.student_count() ? matrix.row(0) : nullptr;
    stride_ = matrix.resource_count();
    rows_ = matrix.student_count();
    log_n_ = std::log(static_cast<double>(rows_));
    cache_.resize(nodes_.size());
}

double BicScorer::family_score(int node, std::uint64_t parent_mask) {
    auto& cache = cache_[static_cast<std::size_t>(node)];
    if (const auto it = cache.find(parent_mask); it != cache.end()) return it->second;
    const double value = compute_family(node, parent_mask);
    cache.emplace(parent_mask, value);
    return value;
}

double BicScorer::compute_family(int node, std::uint64_t parent_mask) const {
    std::vector<int> parent_cols;
    for (int p = 0; p < static_cast<int>(nodes_.size()); ++p) {
        if (parent_mask >> p & 1) parent_cols.push_back(columns_[static_cast<std::size_t>(p)]);
    }
    const int p = static_cast<int>(parent_cols.size());
    if (p > kMaxParents) throw std::invalid_argument("family has too many parents");

    const std::size_t configs = std::size_t{1} << p;
    std::vector<std::uint32_t> counts(configs * 2, 0);
    const int node_col = columns_[static_cast<std::size_t>(node)];
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::uint8_t* row = data_ + r * stride_;
        std::size_t cfg = 0;
        for (int i = 0; i < p; ++i) {
            cfg |= static_cast<std::size_t>(row[parent_cols[static_cast<std::size_t>(i)]]) << i;
        }
        ++counts[cfg * 2 + row[node_col]];
    }

    double log_likelihood = 0.0;
    for (std::size_t j = 0; j < configs; ++j) {
        const double n0 = counts[j * 2];
        const double n1 = counts[j * 2 + 1];
        const double nj = n0 + n1;
        if (n0 > 0) log_likelihood += n0 * std::log(n0 / nj);
        if (n1 > 0) log_likelihood += n1 * std::log(n1 / nj);
    }
    const double penalty = static_cast<double>(configs) * log_n_ / 2.0;
    return log_likelihood - penalty;
}

ScoredNetwork BicScorer::score(const Dag& dag) {
    ScoredNetwork out;
    out.dag = dag;
    out.per_node_scores.resize(dag.node_count(), 0.0);
    std::vector<std::uint64_t> masks(dag.node_count(), 0);
    for (const auto& [src, tgt] : dag.arcs()) {
        masks[static_cast<std::size_t>(tgt)] |= std::uint64_t{1} << src;
    }
    for (std::size_t v = 0; v < dag.node_count(); ++v) {
        out.per_node_scores[v] = family_score(static_cast<int>(v), masks[v]);
        out.score += out.per_node_scores[v];
    }
    return out;
}

ScoredNetwork bic_score(const EngagementMatrix& matrix, const Dag& dag) {
    BicScorer scorer(matrix, dag.nodes());
    return scorer.score(dag);
}

}  // namespace lanet
