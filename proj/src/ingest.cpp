#include "lanet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "lanet/csv.hpp"
#include "lanet/errors.hpp"
#include "lanet/rng.hpp"

namespace lanet {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool contains_ci(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return true;
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InputError("log: required column \"" + name + "\" not found in header");
}

}  // namespace

std::string anonymize_student(const std::string& raw_id) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "s%016llx",
                  static_cast<unsigned long long>(fnv1a64(raw_id.data(), raw_id.size())));
    return buf;
}

std::optional<ResourceId> map_event(const std::string& raw_context, const std::string& raw_event,
                                    const CourseConfig& config) {
    for (const auto& rule : config.mapping_rules) {
        if (contains_ci(raw_context, rule.context_contains) &&
            contains_ci(raw_event, rule.event_contains)) {
            return rule.resource;
        }
    }
    return std::nullopt;
}

ParsedLog parse_log_stream(std::istream& in, const CourseConfig& config) {
    const auto records = csv::read_all(in);
    if (records.empty()) throw InputError("log: missing header row");

    const auto& header = records.front();
    const std::size_t time_col = find_column(header, "Time");
    const std::size_t id_col = find_column(header, config.id_column);
    const std::size_t context_col = find_column(header, "Event context");
    const std::size_t event_col = find_column(header, "Event name");
    const std::size_t width = std::max({time_col, id_col, context_col, event_col}) + 1;

    ParsedLog out;
    for (std::size_t row = 1; row < records.size(); ++row) {
        const auto& fields = records[row];
        // read_record never yields an empty vector; a blank line shows up as {""}
        if (fields.size() == 1 && fields[0].empty()) continue;
        ++out.diagnostics.total;

        if (fields.size() < width) {
            ++out.diagnostics.malformed_time;
            continue;
        }
        const auto timestamp = parse_timestamp(fields[time_col], config.tz_offset_minutes);
        if (!timestamp) {
            ++out.diagnostics.malformed_time;
            continue;
        }
        const auto resource = map_event(fields[context_col], fields[event_col], config);
        if (!resource || fields[id_col].empty()) {
            ++out.diagnostics.unmapped;
            continue;
        }
        ActivityEvent event;
        event.student_id = anonymize_student(fields[id_col]);
        event.timestamp = *timestamp;
        event.resource = *resource;
        event.raw_context = fields[context_col];
        event.raw_event = fields[event_col];
        out.events.push_back(std::move(event));
        ++out.diagnostics.mapped;
    }
    return out;
}

ParsedLog parse_log(const std::string& path, const CourseConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("log: cannot open " + path);
    return parse_log_stream(in, config);
}

}  // namespace lanet
