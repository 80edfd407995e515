#include <doctest.h>

#include "lanet/sensitivity.hpp"
#include "lanet/synthetic.hpp"
#include "test_util.hpp"

using namespace lanet;
using test::rid;

namespace {

SensitivityOptions fast_options(std::vector<int> windows) {
    SensitivityOptions options;
    options.windows = std::move(windows);
    options.bootstrap.iterations = 10;
    options.params.seed = 3;
    return options;
}

}  // namespace

TEST_CASE("events inside the smallest window make every analysis identical") {
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    const EngagementMatrix cohort = sample_cohort(truth, 40, 21);
    EmitOptions emit;
    emit.spread_days = 7;  // everything lands within a week of release
    const auto events = emit_logs(cohort, truth.schedule, 21, emit);

    const SensitivityReport report =
        run_sensitivity(events, config, fast_options({7, 10, 14}));
    REQUIRE(report.jaccard.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(report.jaccard[i][j] == doctest::Approx(1.0));
        }
    }
    // same consensus everywhere
    CHECK(consensus_to_json(report.per_window[0]) == consensus_to_json(report.per_window[1]));
}

TEST_CASE("repeating a window gives jaccard 1 by construction") {
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    const EngagementMatrix cohort = sample_cohort(truth, 30, 5);
    const auto events = emit_logs(cohort, truth.schedule, 5);
    const SensitivityReport report = run_sensitivity(events, config, fast_options({14, 14}));
    CHECK(report.jaccard[0][1] == doctest::Approx(1.0));
    CHECK(report.jaccard[1][0] == doctest::Approx(1.0));
}

TEST_CASE("wider windows see at least as many engagement cells") {
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    const EngagementMatrix cohort = sample_cohort(truth, 60, 8);
    EmitOptions emit;
    emit.spread_days = 21;
    const auto events = emit_logs(cohort, truth.schedule, 8, emit);

    const auto cells_at = [&](int window) {
        CourseConfig windowed = config;
        windowed.window_days = window;
        const EngagementMatrix m = build_matrix(events, windowed.schedule(), windowed);
        std::size_t ones = 0;
        for (std::size_t c = 0; c < m.resource_count(); ++c) ones += m.column_sum(c);
        return ones;
    };
    CHECK(cells_at(7) < cells_at(21));
    CHECK(cells_at(14) < cells_at(21));
    CHECK(cells_at(21) == [&] {
        std::size_t ones = 0;
        for (std::size_t c = 0; c < cohort.resource_count(); ++c) ones += cohort.column_sum(c);
        return ones;
    }());
}

TEST_CASE("jaccard matrix is well-formed on mixed data") {
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    const EngagementMatrix cohort = sample_cohort(truth, 50, 14);
    EmitOptions emit;
    emit.spread_days = 21;
    const auto events = emit_logs(cohort, truth.schedule, 14, emit);
    const SensitivityReport report = run_sensitivity(events, config, fast_options({7, 14, 21}));
    for (std::size_t i = 0; i < report.jaccard.size(); ++i) {
        CHECK(report.jaccard[i][i] == doctest::Approx(1.0));
        for (std::size_t j = 0; j < report.jaccard.size(); ++j) {
            CHECK(report.jaccard[i][j] >= 0.0);
            CHECK(report.jaccard[i][j] <= 1.0);
            CHECK(report.jaccard[i][j] == doctest::Approx(report.jaccard[j][i]));
        }
    }
    // grid rows cover every retained arc and carry per-window strengths
    for (std::size_t a = 0; a < report.grid_arcs.size(); ++a) {
        for (double strength : report.grid[a]) {
            CHECK(strength >= 0.0);
            CHECK(strength <= 1.0);
        }
    }
    const std::string csv = sensitivity_grid_to_csv(report);
    CHECK(csv.find("source,target,w7,w14,w21") == 0);
}

TEST_CASE("option validation") {
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    const auto events = emit_logs(sample_cohort(truth, 10, 1), truth.schedule, 1);
    CHECK_THROWS_AS(run_sensitivity(events, config, fast_options({14})),
                    std::invalid_argument);
    CHECK_THROWS_AS(run_sensitivity(events, config, fast_options({14, 0})),
                    std::invalid_argument);
}
