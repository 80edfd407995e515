#include "lanet/matrix.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lanet/csv.hpp"
#include "lanet/errors.hpp"

namespace lanet {

EngagementMatrix::EngagementMatrix(std::vector<std::string> students,
                                   std::vector<ResourceId> resources,
                                   std::vector<std::uint8_t> cells)
    : students_(std::move(students)), resources_(std::move(resources)), cells_(std::move(cells)) {
    if (cells_.size() != students_.size() * resources_.size()) {
        throw InputError("matrix: cell count does not match dimensions");
    }
    if (!std::is_sorted(students_.begin(), students_.end()) ||
        std::adjacent_find(students_.begin(), students_.end()) != students_.end()) {
        throw InputError("matrix: students must be sorted and unique");
    }
    if (!std::is_sorted(resources_.begin(), resources_.end()) ||
        std::adjacent_find(resources_.begin(), resources_.end()) != resources_.end()) {
        throw InputError("matrix: resources must be in canonical order and unique");
    }
    for (auto c : cells_) {
        if (c > 1) throw InputError("matrix: cells must be 0 or 1");
    }
}

int EngagementMatrix::column_of(const ResourceId& id) const {
    const auto it = std::lower_bound(resources_.begin(), resources_.end(), id);
    if (it == resources_.end() || *it != id) return -1;
    return static_cast<int>(it - resources_.begin());
}

std::size_t EngagementMatrix::column_sum(std::size_t col) const {
    std::size_t sum = 0;
    for (std::size_t r = 0; r < students_.size(); ++r) sum += cell(r, col);
    return sum;
}

double EngagementMatrix::access_rate(std::size_t col) const {
    if (students_.empty()) return 0.0;
    return static_cast<double>(column_sum(col)) / static_cast<double>(students_.size());
}

bool is_synchronous(const ActivityEvent& event, const ReleaseSchedule& schedule,
                    int window_days) {
    const auto it = schedule.release.find(event.resource);
    if (it == schedule.release.end()) {
        throw InputError("no release time for resource " + event.resource.name());
    }
    const UtcSeconds release = it->second;
    const UtcSeconds end = release + static_cast<std::int64_t>(window_days) * kSecondsPerDay;
    return event.timestamp >= release && event.timestamp < end;
}

EngagementMatrix build_matrix(const std::vector<ActivityEvent>& events,
                              const ReleaseSchedule& schedule, const CourseConfig& config) {
    std::vector<ResourceId> resources = canonical_order(config.declared_ids());

    std::set<std::string> student_set;
    for (const auto& e : events) student_set.insert(e.student_id);
    std::vector<std::string> students(student_set.begin(), student_set.end());

    std::map<ResourceId, std::size_t> col_of;
    for (std::size_t c = 0; c < resources.size(); ++c) col_of[resources[c]] = c;

    std::vector<std::uint8_t> cells(students.size() * resources.size(), 0);
    for (const auto& e : events) {
        if (!is_synchronous(e, schedule, config.window_days)) continue;
        const auto row = static_cast<std::size_t>(
            std::lower_bound(students.begin(), students.end(), e.student_id) - students.begin());
        cells[row * resources.size() + col_of.at(e.resource)] = 1;
    }
    return EngagementMatrix(std::move(students), std::move(resources), std::move(cells));
}

ExclusionResult exclude_high_access(const EngagementMatrix& matrix, double rate) {
    if (!(rate > 0.0 && rate <= 1.0)) throw InputError("exclusion rate must be in (0, 1]");
    if (matrix.student_count() == 0) {
        throw InputError("cannot apply high-access exclusion to a matrix with no students");
    }

    ExclusionResult result;
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < matrix.resource_count(); ++c) {
        const double access = matrix.access_rate(c);
        if (access > rate) {
            result.excluded.emplace_back(matrix.resources()[c], access);
        } else {
            keep.push_back(c);
        }
    }

    std::vector<ResourceId> resources;
    resources.reserve(keep.size());
    for (auto c : keep) resources.push_back(matrix.resources()[c]);
    std::vector<std::uint8_t> cells(matrix.student_count() * keep.size());
    for (std::size_t r = 0; r < matrix.student_count(); ++r) {
        for (std::size_t i = 0; i < keep.size(); ++i) {
            cells[r * keep.size() + i] = matrix.cell(r, keep[i]);
        }
    }
    result.matrix = EngagementMatrix(matrix.students(), std::move(resources), std::move(cells));
    return result;
}

std::string matrix_to_csv(const EngagementMatrix& matrix) {
    std::string out;
    std::vector<std::string> header{"student_id"};
    for (const auto& r : matrix.resources()) header.push_back(r.name());
    out += csv::format_record(header);
    std::vector<std::string> fields;
    for (std::size_t r = 0; r < matrix.student_count(); ++r) {
        fields.clear();
        fields.push_back(matrix.students()[r]);
        for (std::size_t c = 0; c < matrix.resource_count(); ++c) {
            fields.push_back(matrix.cell(r, c) ? "1" : "0");
        }
        out += csv::format_record(fields);
    }
    return out;
}

EngagementMatrix matrix_from_csv(std::istream& in) {
    const auto records = csv::read_all(in);
    if (records.empty()) throw InputError("matrix csv: missing header");
    const auto& header = records.front();
    if (header.empty() || header[0] != "student_id") {
        throw InputError("matrix csv: first header column must be student_id");
    }
    std::vector<ResourceId> resources;
    for (std::size_t c = 1; c < header.size(); ++c) {
        auto id = ResourceId::parse(header[c]);
        if (!id) throw InputError("matrix csv: bad resource name \"" + header[c] + "\"");
        resources.push_back(*id);
    }

    // Accept any row/column order; normalize to canonical.
    std::vector<std::size_t> order(resources.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return resources[a] < resources[b]; });

    std::map<std::string, std::vector<std::uint8_t>> rows;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& fields = records[r];
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() != header.size()) {
            throw InputError("matrix csv: row " + std::to_string(r) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        }
        std::vector<std::uint8_t> row(resources.size());
        for (std::size_t i = 0; i < resources.size(); ++i) {
            const std::string& v = fields[1 + order[i]];
            if (v != "0" && v != "1") {
                throw InputError("matrix csv: cell values must be 0 or 1, got \"" + v + "\"");
            }
            row[i] = v == "1" ? 1 : 0;
        }
        if (!rows.emplace(fields[0], std::move(row)).second) {
            throw InputError("matrix csv: duplicate student id \"" + fields[0] + "\"");
        }
    }

    std::vector<ResourceId> sorted_resources;
    sorted_resources.reserve(resources.size());
    for (auto i : order) sorted_resources.push_back(resources[i]);

    std::vector<std::string> students;
    std::vector<std::uint8_t> cells;
    students.reserve(rows.size());
    cells.reserve(rows.size() * resources.size());
    for (auto& [id, row] : rows) {
        students.push_back(id);
        cells.insert(cells.end(), row.begin(), row.end());
    }
    return EngagementMatrix(std::move(students), std::move(sorted_resources), std::move(cells));
}

EngagementMatrix load_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("matrix csv: cannot open " + path);
    return matrix_from_csv(in);
}

}  // namespace lanet
