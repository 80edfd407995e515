#pragma once

#include <map>
#include <string>
#include <vector>

#include "lanet/resource.hpp"
#include "lanet/timestamp.hpp"

namespace lanet {

/// A declared course resource with its release time.
struct DeclaredResource {
    ResourceId id;
    UtcSeconds release = 0;
};

/// Maps raw log rows onto a declared resource. Both patterns are
/// case-insensitive substring matches against the Event context / Event name
/// columns; an empty pattern matches anything. Rules apply in declared order,
/// first match wins.
struct MappingRule {
    std::string context_contains;
    std::string event_contains;
    ResourceId resource;
};

/// Release time per declared resource.
struct ReleaseSchedule {
    std::map<ResourceId, UtcSeconds> release;

    bool contains(const ResourceId& id) const { return release.count(id) > 0; }
};

/// Course configuration: declared resources with release times, log mapping
/// rules, and the analysis parameters. Loaded from JSON (snake_case keys,
/// unknown keys rejected).
struct CourseConfig {
    int max_chapter = 9;
    std::vector<DeclaredResource> resources;
    std::vector<MappingRule> mapping_rules;
    int window_days = 14;
    double exclusion_rate = 0.95;
    std::string id_column = "User full name";
    /// Zone applied to log timestamps that carry no explicit offset, in
    /// minutes east of UTC.
    int tz_offset_minutes = 0;

    ReleaseSchedule schedule() const;
    std::vector<ResourceId> declared_ids() const;

    /// Checks every invariant: chapters in range, no duplicate declarations,
    /// rules referencing declared resources only, window_days > 0,
    /// exclusion_rate in (0, 1]. Throws ConfigError on the first violation.
    void validate() const;
};

/// Parse and validate a config file. Throws ConfigError on malformed JSON,
/// schema violations (including unknown keys), or invariant violations.
CourseConfig load_config(const std::string& path);

/// Same, from an in-memory JSON document.
CourseConfig parse_config_json(const std::string& json_text);

/// Serialize back to the schema accepted by load_config.
std::string config_to_json(const CourseConfig& config);

}  // namespace lanet
