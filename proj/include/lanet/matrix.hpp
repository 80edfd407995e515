#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lanet/config.hpp"
#include "lanet/ingest.hpp"
#include "lanet/resource.hpp"

namespace lanet {

/// Binary students x resources table of synchronous engagement. Rows are
/// sorted by student id and columns by canonical resource order, so the
/// matrix is a pure function of its (event set, schedule, config) inputs:
/// reordering events cannot change it. Multiple clicks collapse to a single 1.
class EngagementMatrix {
public:
    EngagementMatrix() = default;

    /// students must be sorted and unique; resources sorted in canonical
    /// order and unique; cells row-major with values 0/1. Throws InputError
    /// otherwise.
    EngagementMatrix(std::vector<std::string> students, std::vector<ResourceId> resources,
                     std::vector<std::uint8_t> cells);

    std::size_t student_count() const { return students_.size(); }
    std::size_t resource_count() const { return resources_.size(); }

    const std::vector<std::string>& students() const { return students_; }
    const std::vector<ResourceId>& resources() const { return resources_; }

    std::uint8_t cell(std::size_t row, std::size_t col) const {
        return cells_[row * resources_.size() + col];
    }
    const std::uint8_t* row(std::size_t r) const { return &cells_[r * resources_.size()]; }

    /// Index of a resource column, or -1 if absent.
    int column_of(const ResourceId& id) const;

    std::size_t column_sum(std::size_t col) const;

    /// column sum / student count, in [0, 1].
    double access_rate(std::size_t col) const;

    bool operator==(const EngagementMatrix& other) const = default;

private:
    std::vector<std::string> students_;
    std::vector<ResourceId> resources_;
    std::vector<std::uint8_t> cells_;
};

/// True iff the event falls inside the half-open synchronous window
/// [release, release + window_days * 24h). Throws InputError when the
/// resource has no release time in the schedule.
bool is_synchronous(const ActivityEvent& event, const ReleaseSchedule& schedule, int window_days);

/// Build the engagement matrix: one row per distinct student id seen in the
/// events (students with no synchronous event keep an all-zero row), one
/// column per declared resource, cell = 1 iff the student has at least one
/// synchronous event for that resource.
EngagementMatrix build_matrix(const std::vector<ActivityEvent>& events,
                              const ReleaseSchedule& schedule, const CourseConfig& config);

/// A column dropped by the high-access rule, with its access rate.
using ExcludedResource = std::pair<ResourceId, double>;

struct ExclusionResult {
    EngagementMatrix matrix;  // surviving columns, order preserved, cells untouched
    std::vector<ExcludedResource> excluded;
};

/// Drop every column whose access rate is strictly greater than rate
/// ("over 95%" is strict: a column at exactly the rate is retained).
/// Requires 0 < rate <= 1 and at least one student.
ExclusionResult exclude_high_access(const EngagementMatrix& matrix, double rate);

/// CSV round trip: header "student_id,<resource names...>", cells 0/1.
std::string matrix_to_csv(const EngagementMatrix& matrix);
EngagementMatrix matrix_from_csv(std::istream& in);
EngagementMatrix load_matrix_csv(const std::string& path);

}  // namespace lanet
