#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanet/config.hpp"
#include "lanet/cpt.hpp"
#include "lanet/dag.hpp"
#include "lanet/ingest.hpp"
#include "lanet/matrix.hpp"

namespace lanet {

/// A known generating model: structure, tables, and release schedule.
/// Cohorts sampled from it give every downstream stage a testable target.
struct GroundTruth {
    Dag dag;
    CptSet cpts;
    ReleaseSchedule schedule;
    std::string label;
};

/// The built-in reference course: nine weekly chapters of lecture notes,
/// videos, quizzes, and code submissions (sub_9 not offered), released on
/// consecutive Mondays of a ten-week term starting 2022-10-03.
///
/// Six conditional probabilities are pinned reproduction targets used by the
/// bundled acceptance queries:
///
///   P(sub_6=1  | sub_5=1)          = 0.80
///   P(sub_8=1  | sub_6=1, sub_7=1) = 0.85
///   P(sub_7=1  | vid_7=1)          = 0.83
///   P(vid_4=1  | vid_3=1)          = 0.82
///   P(quiz_2=1 | quiz_1=0)         = 0.14
///   P(quiz_3=1 | quiz_2=0)         = 0.07
///
/// Every other entry — root marginals, the complementary rows of the pinned
/// tables, the remaining chain strengths, the near-universal ln_1..ln_3
/// access, and the deliberately weak vid_4 -> ln_5 arc — is a free parameter
/// of this preset, chosen only to make the cohort behave like a plausible
/// course.
GroundTruth reference_preset();

/// n i.i.d. student rows by ancestral sampling in topological order.
/// Row i draws from a stream derived from (seed, i); identical seeds give
/// identical matrices.
EngagementMatrix sample_cohort(const GroundTruth& truth, std::size_t n_students,
                               std::uint64_t seed);

struct EmitOptions {
    /// Engagement timestamps land uniformly in [release, release + spread_days * 24h).
    int spread_days = 14;
    /// Per engagement event: probability of an extra pre-release click on the
    /// same resource (outside every possible window).
    double async_rate = 0.0;
    /// Per engagement event: probability of an extra row no mapping rule
    /// matches.
    double unmappable_rate = 0.0;
};

/// A raw log row that intentionally matches no mapping rule.
struct UnmappableRow {
    std::string student_id;
    UtcSeconds timestamp = 0;
    std::string raw_context;
    std::string raw_event;
};

struct SyntheticLog {
    std::vector<ActivityEvent> events;  // mappable rows: engagement plus async decoys
    std::vector<UnmappableRow> unmappable;
    std::size_t engagement_count = 0;
    std::size_t async_count = 0;
};

/// Emit at least one synchronous event per 1-cell (so build_matrix recovers
/// the matrix exactly when spread_days fits the analysis window), plus decoy
/// rows per the options. Throws InputError when a matrix resource has no
/// release time.
SyntheticLog emit_log_rows(const EngagementMatrix& matrix, const ReleaseSchedule& schedule,
                           std::uint64_t seed, const EmitOptions& options = {});

/// Just the mappable events.
std::vector<ActivityEvent> emit_logs(const EngagementMatrix& matrix,
                                     const ReleaseSchedule& schedule, std::uint64_t seed,
                                     const EmitOptions& options = {});

/// Render a synthetic log as a Moodle-style CSV export (Time, id column,
/// Event context, Event name), rows sorted by time. Timestamps are written
/// in the minute-precision export format.
std::string synthetic_log_to_csv(const SyntheticLog& log, const CourseConfig& config);

/// Course config whose declared resources, releases, and mapping rules match
/// the ground truth's nodes and the raw strings emit_log_rows produces.
CourseConfig default_course_config(const GroundTruth& truth);

/// JSON round trip so external presets can be defined and loaded.
std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const std::string& json_text);
GroundTruth load_ground_truth(const std::string& path);

}  // namespace lanet
