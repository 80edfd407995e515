#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lanet/config.hpp"
#include "lanet/resource.hpp"
#include "lanet/timestamp.hpp"

namespace lanet {

/// One student click mapped to a resource. student_id is the anonymized
/// identity (a stable hash of the configured id column); raw names never
/// leave the parser.
struct ActivityEvent {
    std::string student_id;
    UtcSeconds timestamp = 0;
    ResourceId resource;
    std::string raw_context;
    std::string raw_event;
};

/// Row accounting for one parse_log run. Every data row lands in exactly one
/// bucket: events.size() + unmapped + malformed_time == total.
/// unmapped counts rows that no mapping rule matched as well as rows with an
/// empty student id.
struct IngestDiagnostics {
    std::size_t total = 0;
    std::size_t mapped = 0;
    std::size_t unmapped = 0;
    std::size_t malformed_time = 0;
};

/// Anonymize a raw student identifier ("s" + 16 hex digits of a stable hash).
std::string anonymize_student(const std::string& raw_id);

/// Apply the config's mapping rules to a raw (context, event) pair.
/// Case-insensitive substring match on both patterns; first declared match
/// wins; no match yields nullopt.
std::optional<ResourceId> map_event(const std::string& raw_context, const std::string& raw_event,
                                    const CourseConfig& config);

struct ParsedLog {
    std::vector<ActivityEvent> events;  // file order
    IngestDiagnostics diagnostics;
};

/// Parse a Moodle-style activity-log CSV export. The header row must contain
/// the Time, Event context, and Event name columns plus the configured id
/// column; a missing column or unreadable file throws InputError. Malformed
/// rows are counted and skipped, never fatal.
ParsedLog parse_log(const std::string& path, const CourseConfig& config);

/// Same, from any input stream (the path overload opens the file and calls
/// this).
ParsedLog parse_log_stream(std::istream& in, const CourseConfig& config);

}  // namespace lanet
