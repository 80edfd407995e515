#include "lanet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lanet/errors.hpp"

namespace lanet {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!known.count(item.key())) {
            throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

ResourceId parse_resource_name(const json& value, int max_chapter, const std::string& where) {
    if (!value.is_string()) throw ConfigError(where + ": resource name must be a string");
    const std::string name = value.get<std::string>();
    auto id = ResourceId::parse(name, max_chapter);
    if (!id) {
        throw ConfigError(where + ": invalid resource name \"" + name +
                          "\" (expected ln|vid|quiz|sub _<chapter>, chapter in [1, " +
                          std::to_string(max_chapter) + "])");
    }
    return *id;
}

int get_int(const json& obj, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) {
        throw ConfigError(std::string("config: ") + key + " must be an integer");
    }
    return obj[key].get<int>();
}

}  // namespace

ReleaseSchedule CourseConfig::schedule() const {
    ReleaseSchedule s;
    for (const auto& r : resources) s.release[r.id] = r.release;
    return s;
}

std::vector<ResourceId> CourseConfig::declared_ids() const {
    std::vector<ResourceId> ids;
    ids.reserve(resources.size());
    for (const auto& r : resources) ids.push_back(r.id);
    return ids;
}

void CourseConfig::validate() const {
    if (max_chapter < 1) throw ConfigError("config: max_chapter must be >= 1");
    if (window_days <= 0) throw ConfigError("config: window_days must be > 0");
    if (!(exclusion_rate > 0.0 && exclusion_rate <= 1.0)) {
        throw ConfigError("config: exclusion_rate must be in (0, 1]");
    }
    if (id_column.empty()) throw ConfigError("config: id_column must not be empty");

    std::set<ResourceId> seen;
    for (const auto& r : resources) {
        if (r.id.chapter < 1 || r.id.chapter > max_chapter) {
            throw ConfigError("config: resource " + r.id.name() + " has chapter outside [1, " +
                              std::to_string(max_chapter) + "]");
        }
        if (!seen.insert(r.id).second) {
            throw ConfigError("config: resource " + r.id.name() + " declared more than once");
        }
    }
    for (const auto& rule : mapping_rules) {
        if (!seen.count(rule.resource)) {
            throw ConfigError("config: mapping rule references undeclared resource " +
                              rule.resource.name());
        }
    }
}

CourseConfig parse_config_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");

    reject_unknown_keys(doc,
                        {"max_chapter", "resources", "mapping_rules", "window_days",
                         "exclusion_rate", "id_column", "tz_offset_minutes"},
                        "config");

    CourseConfig config;
    config.max_chapter = get_int(doc, "max_chapter", config.max_chapter);
    config.window_days = get_int(doc, "window_days", config.window_days);
    config.tz_offset_minutes = get_int(doc, "tz_offset_minutes", config.tz_offset_minutes);
    if (doc.contains("exclusion_rate")) {
        if (!doc["exclusion_rate"].is_number()) {
            throw ConfigError("config: exclusion_rate must be a number");
        }
        config.exclusion_rate = doc["exclusion_rate"].get<double>();
    }
    if (doc.contains("id_column")) {
        if (!doc["id_column"].is_string()) throw ConfigError("config: id_column must be a string");
        config.id_column = doc["id_column"].get<std::string>();
    }

    if (!doc.contains("resources") || !doc["resources"].is_array()) {
        throw ConfigError("config: \"resources\" array is required");
    }
    for (const auto& entry : doc["resources"]) {
        if (!entry.is_object()) throw ConfigError("config: resources entries must be objects");
        reject_unknown_keys(entry, {"id", "release"}, "resources entry");
        if (!entry.contains("id") || !entry.contains("release")) {
            throw ConfigError("config: resources entries need \"id\" and \"release\"");
        }
        DeclaredResource r;
        r.id = parse_resource_name(entry["id"], config.max_chapter, "resources");
        if (!entry["release"].is_string()) {
            throw ConfigError("config: release must be a timestamp string");
        }
        auto release =
            parse_timestamp(entry["release"].get<std::string>(), config.tz_offset_minutes);
        if (!release) {
            throw ConfigError("config: unparseable release timestamp for " + r.id.name() + ": \"" +
                              entry["release"].get<std::string>() + "\"");
        }
        r.release = *release;
        config.resources.push_back(r);
    }

    if (doc.contains("mapping_rules")) {
        if (!doc["mapping_rules"].is_array()) {
            throw ConfigError("config: mapping_rules must be an array");
        }
        for (const auto& entry : doc["mapping_rules"]) {
            if (!entry.is_object()) {
                throw ConfigError("config: mapping_rules entries must be objects");
            }
            reject_unknown_keys(entry, {"context_contains", "event_contains", "resource"},
                                "mapping_rules entry");
            if (!entry.contains("resource")) {
                throw ConfigError("config: mapping rule needs \"resource\"");
            }
            MappingRule rule;
            if (entry.contains("context_contains")) {
                if (!entry["context_contains"].is_string()) {
                    throw ConfigError("config: context_contains must be a string");
                }
                rule.context_contains = entry["context_contains"].get<std::string>();
            }
            if (entry.contains("event_contains")) {
                if (!entry["event_contains"].is_string()) {
                    throw ConfigError("config: event_contains must be a string");
                }
                rule.event_contains = entry["event_contains"].get<std::string>();
            }
            rule.resource = parse_resource_name(entry["resource"], config.max_chapter,
                                                "mapping_rules");
            config.mapping_rules.push_back(rule);
        }
    }

    config.validate();
    return config;
}

CourseConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

std::string config_to_json(const CourseConfig& config) {
    json doc;
    doc["max_chapter"] = config.max_chapter;
    doc["window_days"] = config.window_days;
    doc["exclusion_rate"] = config.exclusion_rate;
    doc["id_column"] = config.id_column;
    doc["tz_offset_minutes"] = config.tz_offset_minutes;
    doc["resources"] = json::array();
    for (const auto& r : config.resources) {
        doc["resources"].push_back({{"id", r.id.name()}, {"release", format_iso(r.release)}});
    }
    doc["mapping_rules"] = json::array();
    for (const auto& rule : config.mapping_rules) {
        doc["mapping_rules"].push_back({{"context_contains", rule.context_contains},
                                        {"event_contains", rule.event_contains},
                                        {"resource", rule.resource.name()}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace lanet
