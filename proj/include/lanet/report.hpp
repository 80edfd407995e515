#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanet/bootstrap.hpp"
#include "lanet/infer.hpp"
#include "lanet/matrix.hpp"

namespace lanet {

/// Graphviz DOT rendering of a consensus network. Nodes are filled by kind
/// (quiz blue, video green, lecture notes orange, submission pink); arc pen
/// width grows linearly from 1 at strength 0 to 5 at strength 1. Output is
/// byte-stable for a given consensus.
std::string to_dot(const ConsensusNetwork& consensus);

/// Parameters echoed into the report header.
struct RunInfo {
    std::uint64_t seed = 0;
    int window_days = 14;
    int iterations = 100;
    double threshold = 0.5;
    double alpha = 1.0;
    std::size_t log_rows_total = 0;
    std::size_t log_rows_mapped = 0;
    bool have_ingest = false;
};

/// Markdown summary: run parameters, excluded resources with access rates,
/// consensus arcs with strengths (plus any arcs dropped to break cycles),
/// and each requested query answered twice — by the fitted model and by the
/// empirical conditional frequency with its support count. The query section
/// is omitted when no queries are given. Every number is recomputable from
/// the exported matrix/strengths/consensus artifacts.
std::string summary_report(const ConsensusNetwork& consensus, const CptSet& cpts,
                           const EngagementMatrix& matrix,
                           const std::vector<ExcludedResource>& excluded,
                           const std::vector<Query>& queries, const RunInfo& info);

}  // namespace lanet
