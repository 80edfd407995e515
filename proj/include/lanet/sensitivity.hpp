#pragma once

#include <vector>

#include "lanet/bootstrap.hpp"
#include "lanet/ingest.hpp"
#include "lanet/matrix.hpp"

namespace lanet {

struct SensitivityOptions {
    std::vector<int> windows = {7, 10, 14, 17, 21};
    double exclusion_rate = 0.95;
    BootstrapOptions bootstrap;
    SearchParams params;
};

/// How the consensus structure reacts to the synchronous-window definition:
/// the same events re-analyzed under each window, a strength grid over the
/// union of retained arcs, and pairwise Jaccard similarity of the retained
/// edge sets (two empty sets count as identical).
struct SensitivityReport {
    std::vector<int> windows;
    std::vector<ConsensusNetwork> per_window;
    std::vector<NamedArc> grid_arcs;           // retained in at least one window
    std::vector<std::vector<double>> grid;     // grid[arc][window] = strength
    std::vector<std::vector<double>> jaccard;  // jaccard[i][j] over retained sets
};

/// Rebuild matrix -> exclusion -> bootstrap consensus once per window, all
/// from the same seed. Requires at least two windows, each positive.
SensitivityReport run_sensitivity(const std::vector<ActivityEvent>& events,
                                  const CourseConfig& config, const SensitivityOptions& options);

std::string sensitivity_to_json(const SensitivityReport& report);

/// Grid CSV: source,target,w<days>... with one row per union arc.
std::string sensitivity_grid_to_csv(const SensitivityReport& report);

}  // namespace lanet
