#include "lanet/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lanet/csv.hpp"
#include "lanet/errors.hpp"
#include "lanet/rng.hpp"

namespace lanet {

using nlohmann::json;

namespace {

constexpr int kTermChapters = 9;

UtcSeconds term_start() { return days_from_civil(2022, 10, 3) * kSecondsPerDay; }

UtcSeconds chapter_release(int chapter) {
    return term_start() + static_cast<std::int64_t>(chapter - 1) * 7 * kSecondsPerDay;
}

struct PresetBuilder {
    Dag dag;
    CptSet cpts;

    explicit PresetBuilder(std::vector<ResourceId> nodes) : dag(std::move(nodes)) {
        cpts.alpha = 0.0;
        cpts.per_node.resize(dag.node_count());
    }

    int idx(const char* name) const { return dag.index_of(*ResourceId::parse(name)); }

    void root(const char* name, double p) {
        NodeCpt& cpt = cpts.per_node[static_cast<std::size_t>(idx(name))];
        cpt.parents = {};
        cpt.p_one = {p};
        cpt.unseen.assign(1, 0);
    }

    /// p_given[cfg] indexed by parent bits, bit i = value of parents[i]
    /// (parents listed in ascending node order).
    void child(const char* name, std::vector<const char*> parents,
               std::vector<double> p_given) {
        const int v = idx(name);
        NodeCpt& cpt = cpts.per_node[static_cast<std::size_t>(v)];
        for (const char* p : parents) {
            cpt.parents.push_back(idx(p));
            dag.add_arc(idx(p), v);
        }
        if (!std::is_sorted(cpt.parents.begin(), cpt.parents.end())) {
            throw std::logic_error("preset: parents must be listed in ascending node order");
        }
        if (p_given.size() != std::size_t{1} << parents.size()) {
            throw std::logic_error("preset: table size mismatch");
        }
        cpt.p_one = std::move(p_given);
        cpt.unseen.assign(cpt.p_one.size(), 0);
    }
};

std::string context_for(const ResourceId& id) {
    const std::string chapter = std::to_string(id.chapter);
    switch (id.kind) {
        case ResourceKind::LectureNotes: return "Page: Chapter " + chapter + " lecture notes";
        case ResourceKind::Video: return "Video: Chapter " + chapter + " video";
        case ResourceKind::Quiz: return "Quiz: Chapter " + chapter + " quiz";
        case ResourceKind::Submission:
            return "Assignment: Chapter " + chapter + " code submission";
    }
    return "";
}

std::string event_for(ResourceKind kind) {
    switch (kind) {
        case ResourceKind::LectureNotes:
        case ResourceKind::Video: return "Course module viewed";
        case ResourceKind::Quiz: return "Quiz attempt started";
        case ResourceKind::Submission: return "A submission has been submitted.";
    }
    return "";
}

std::string rule_context_for(const ResourceId& id) {
    const std::string chapter = std::to_string(id.chapter);
    switch (id.kind) {
        case ResourceKind::LectureNotes: return "chapter " + chapter + " lecture notes";
        case ResourceKind::Video: return "chapter " + chapter + " video";
        case ResourceKind::Quiz: return "chapter " + chapter + " quiz";
        case ResourceKind::Submission: return "chapter " + chapter + " code submission";
    }
    return "";
}

std::string rule_event_for(ResourceKind kind) {
    switch (kind) {
        case ResourceKind::LectureNotes:
        case ResourceKind::Video: return "viewed";
        case ResourceKind::Quiz: return "attempt";
        case ResourceKind::Submission: return "submitted";
    }
    return "";
}

}  // namespace

GroundTruth reference_preset() {
    std::vector<ResourceId> nodes;
    for (int chapter = 1; chapter <= kTermChapters; ++chapter) {
        nodes.push_back({ResourceKind::LectureNotes, chapter});
        nodes.push_back({ResourceKind::Video, chapter});
        nodes.push_back({ResourceKind::Quiz, chapter});
        if (chapter <= 8) nodes.push_back({ResourceKind::Submission, chapter});
    }

    PresetBuilder b(nodes);

    // Lecture notes: the first three chapters see near-universal access (the
    // pipeline's high-access rule is expected to drop them); later chapters
    // form a habit chain. ln_5 additionally takes a deliberately weak arc
    // from vid_4 so the preset has a dependence below any recovery bar.
    b.root("ln_1", 0.97);
    b.root("ln_2", 0.97);
    b.root("ln_3", 0.97);
    b.root("ln_4", 0.65);
    b.child("ln_5", {"ln_4", "vid_4"}, {0.18, 0.73, 0.25, 0.78});
    b.child("ln_6", {"ln_5"}, {0.20, 0.75});
    b.child("ln_7", {"ln_6"}, {0.20, 0.75});
    b.child("ln_8", {"ln_7"}, {0.20, 0.75});
    b.child("ln_9", {"ln_8"}, {0.20, 0.75});

    // Videos: a chapter-to-chapter habit chain; vid_3 -> vid_4 is a pinned
    // query target.
    b.root("vid_1", 0.70);
    b.child("vid_2", {"vid_1"}, {0.20, 0.80});
    b.child("vid_3", {"vid_2"}, {0.20, 0.80});
    b.child("vid_4", {"vid_3"}, {0.25, 0.82});
    b.child("vid_5", {"vid_4"}, {0.20, 0.80});
    b.child("vid_6", {"vid_5"}, {0.20, 0.80});
    b.child("vid_7", {"vid_6"}, {0.20, 0.80});
    b.child("vid_8", {"vid_7"}, {0.20, 0.80});
    b.child("vid_9", {"vid_8"}, {0.20, 0.80});

    // Quizzes link only to each other; skipping one sharply lowers the odds
    // of attempting the next (the 0.14 and 0.07 rows are pinned targets).
    b.root("quiz_1", 0.60);
    b.child("quiz_2", {"quiz_1"}, {0.14, 0.85});
    b.child("quiz_3", {"quiz_2"}, {0.07, 0.80});
    b.child("quiz_4", {"quiz_3"}, {0.10, 0.78});
    b.child("quiz_5", {"quiz_4"}, {0.10, 0.78});
    b.child("quiz_6", {"quiz_5"}, {0.10, 0.78});
    b.child("quiz_7", {"quiz_6"}, {0.10, 0.78});
    b.child("quiz_8", {"quiz_7"}, {0.10, 0.78});
    b.child("quiz_9", {"quiz_8"}, {0.10, 0.78});

    // Submissions: disconnected through mid-term, then a dependent tail.
    // sub_6|sub_5, sub_7|vid_7, and sub_8|sub_6,sub_7 are pinned targets.
    b.root("sub_1", 0.70);
    b.root("sub_2", 0.65);
    b.root("sub_3", 0.60);
    b.root("sub_4", 0.55);
    b.root("sub_5", 0.55);
    b.child("sub_6", {"sub_5"}, {0.30, 0.80});
    b.child("sub_7", {"vid_7"}, {0.35, 0.83});
    b.child("sub_8", {"sub_6", "sub_7"}, {0.10, 0.45, 0.40, 0.85});

    GroundTruth truth;
    truth.dag = std::move(b.dag);
    truth.cpts = std::move(b.cpts);
    truth.label = "reference";
    for (const auto& node : truth.dag.nodes()) {
        truth.schedule.release[node] = chapter_release(node.chapter);
    }
    if (!truth.dag.is_acyclic() || !truth.dag.tier_legal()) {
        throw std::logic_error("preset: structure must be acyclic and tier-legal");
    }
    return truth;
}

EngagementMatrix sample_cohort(const GroundTruth& truth, std::size_t n_students,
                               std::uint64_t seed) {
    if (n_students < 1) throw std::invalid_argument("n_students must be >= 1");
    const auto order = truth.dag.topological_order();
    if (!order) throw std::invalid_argument("ground truth dag is cyclic");

    const std::size_t width = truth.dag.node_count();
    std::vector<std::string> students;
    students.reserve(n_students);
    char name[24];
    for (std::size_t i = 0; i < n_students; ++i) {
        std::snprintf(name, sizeof(name), "s%06zu", i);
        students.emplace_back(name);
    }

    std::vector<std::uint8_t> cells(n_students * width, 0);
    std::vector<std::uint8_t> row(width, 0);
    for (std::size_t i = 0; i < n_students; ++i) {
        Rng rng = derive_stream(seed, i);
        for (int v : *order) {
            const NodeCpt& cpt = truth.cpts.per_node[static_cast<std::size_t>(v)];
            std::size_t cfg = 0;
            for (std::size_t p = 0; p < cpt.parents.size(); ++p) {
                cfg |= static_cast<std::size_t>(row[static_cast<std::size_t>(cpt.parents[p])])
                       << p;
            }
            row[static_cast<std::size_t>(v)] = rng.next_bernoulli(cpt.p_one[cfg]) ? 1 : 0;
        }
        std::copy(row.begin(), row.end(), cells.begin() + static_cast<std::ptrdiff_t>(i * width));
    }
    return EngagementMatrix(std::move(students), truth.dag.nodes(), std::move(cells));
}

SyntheticLog emit_log_rows(const EngagementMatrix& matrix, const ReleaseSchedule& schedule,
                           std::uint64_t seed, const EmitOptions& options) {
    if (options.spread_days < 1) throw std::invalid_argument("spread_days must be >= 1");
    std::vector<UtcSeconds> releases(matrix.resource_count());
    UtcSeconds earliest = 0;
    bool have_earliest = false;
    for (std::size_t c = 0; c < matrix.resource_count(); ++c) {
        const auto it = schedule.release.find(matrix.resources()[c]);
        if (it == schedule.release.end()) {
            throw InputError("no release time for resource " + matrix.resources()[c].name());
        }
        releases[c] = it->second;
        if (!have_earliest || it->second < earliest) earliest = it->second;
        have_earliest = true;
    }

    const std::int64_t spread_seconds =
        static_cast<std::int64_t>(options.spread_days) * kSecondsPerDay;
    SyntheticLog log;
    for (std::size_t r = 0; r < matrix.student_count(); ++r) {
        Rng rng = derive_stream(seed, 0x10000000ULL + r);
        const std::string& student = matrix.students()[r];
        for (std::size_t c = 0; c < matrix.resource_count(); ++c) {
            if (!matrix.cell(r, c)) continue;
            const ResourceId& resource = matrix.resources()[c];
            ActivityEvent event;
            event.student_id = student;
            event.timestamp =
                releases[c] +
                static_cast<std::int64_t>(
                    rng.next_below(static_cast<std::uint64_t>(spread_seconds) / 60) * 60);
            event.resource = resource;
            event.raw_context = context_for(resource);
            event.raw_event = event_for(resource.kind);
            log.events.push_back(event);
            ++log.engagement_count;

            if (options.async_rate > 0 && rng.next_bernoulli(options.async_rate)) {
                // A click strictly before the earliest release is outside
                // every window, whatever window length the analysis uses.
                ActivityEvent decoy = event;
                decoy.timestamp =
                    earliest - 60 -
                    static_cast<std::int64_t>(
                        rng.next_below(7 * static_cast<std::uint64_t>(kSecondsPerDay) / 60) * 60);
                log.events.push_back(decoy);
                ++log.async_count;
            }
            if (options.unmappable_rate > 0 && rng.next_bernoulli(options.unmappable_rate)) {
                UnmappableRow row;
                row.student_id = student;
                row.timestamp = event.timestamp + 60;
                row.raw_context = "Forum: Course announcements";
                row.raw_event = "Post created";
                log.unmappable.push_back(row);
            }
        }
    }
    return log;
}

std::vector<ActivityEvent> emit_logs(const EngagementMatrix& matrix,
                                     const ReleaseSchedule& schedule, std::uint64_t seed,
                                     const EmitOptions& options) {
    return emit_log_rows(matrix, schedule, seed, options).events;
}

std::string synthetic_log_to_csv(const SyntheticLog& log, const CourseConfig& config) {
    struct Row {
        UtcSeconds time;
        std::string student;
        std::string context;
        std::string event;
    };
    std::vector<Row> rows;
    rows.reserve(log.events.size() + log.unmappable.size());
    for (const auto& e : log.events) {
        rows.push_back({e.timestamp, e.student_id, e.raw_context, e.raw_event});
    }
    for (const auto& u : log.unmappable) {
        rows.push_back({u.timestamp, u.student_id, u.raw_context, u.raw_event});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.time, a.student, a.context, a.event) <
               std::tie(b.time, b.student, b.context, b.event);
    });

    std::string out = csv::format_record({"Time", config.id_column, "Event context",
                                          "Event name"});
    for (const auto& row : rows) {
        out += csv::format_record(
            {format_moodle(row.time), row.student, row.context, row.event});
    }
    return out;
}

CourseConfig default_course_config(const GroundTruth& truth) {
    CourseConfig config;
    config.max_chapter = 0;
    for (const auto& node : truth.dag.nodes()) {
        config.max_chapter = std::max(config.max_chapter, node.chapter);
        DeclaredResource r;
        r.id = node;
        r.release = truth.schedule.release.at(node);
        config.resources.push_back(r);
        MappingRule rule;
        rule.context_contains = rule_context_for(node);
        rule.event_contains = rule_event_for(node.kind);
        rule.resource = node;
        config.mapping_rules.push_back(rule);
    }
    config.validate();
    return config;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
    json doc;
    doc["label"] = truth.label;
    doc["nodes"] = json::array();
    for (const auto& node : truth.dag.nodes()) doc["nodes"].push_back(node.name());

    json cpts = json::object();
    for (std::size_t v = 0; v < truth.dag.node_count(); ++v) {
        const NodeCpt& cpt = truth.cpts.per_node[v];
        json entry;
        entry["parents"] = json::array();
        for (int p : cpt.parents) {
            entry["parents"].push_back(truth.dag.nodes()[static_cast<std::size_t>(p)].name());
        }
        entry["p_one"] = cpt.p_one;
        cpts[truth.dag.nodes()[v].name()] = entry;
    }
    doc["cpts"] = cpts;

    json schedule = json::object();
    for (const auto& [id, release] : truth.schedule.release) {
        schedule[id.name()] = format_iso(release);
    }
    doc["schedule"] = schedule;
    return doc.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw InputError(std::string("ground truth: malformed JSON: ") + e.what());
    }
    GroundTruth truth;
    truth.label = doc.value("label", "");
    std::vector<ResourceId> nodes;
    for (const auto& name : doc.at("nodes")) {
        const auto id = ResourceId::parse(name.get<std::string>());
        if (!id) throw InputError("ground truth: bad node name");
        nodes.push_back(*id);
    }
    truth.dag = Dag(nodes);
    truth.cpts.alpha = 0.0;
    truth.cpts.per_node.resize(nodes.size());

    for (const auto& [name, entry] : doc.at("cpts").items()) {
        const auto id = ResourceId::parse(name);
        if (!id) throw InputError("ground truth: bad cpt node name");
        const int v = truth.dag.index_of(*id);
        if (v < 0) throw InputError("ground truth: cpt for unknown node " + name);
        NodeCpt& cpt = truth.cpts.per_node[static_cast<std::size_t>(v)];
        for (const auto& parent : entry.at("parents")) {
            const auto pid = ResourceId::parse(parent.get<std::string>());
            if (!pid) throw InputError("ground truth: bad parent name");
            const int p = truth.dag.index_of(*pid);
            if (p < 0) throw InputError("ground truth: unknown parent " + parent.get<std::string>());
            cpt.parents.push_back(p);
            truth.dag.add_arc(p, v);
        }
        if (!std::is_sorted(cpt.parents.begin(), cpt.parents.end())) {
            throw InputError("ground truth: parents must be listed in ascending node order");
        }
        cpt.p_one = entry.at("p_one").get<std::vector<double>>();
        if (cpt.p_one.size() != std::size_t{1} << cpt.parents.size()) {
            throw InputError("ground truth: p_one size must be 2^parents for " + name);
        }
        for (double p : cpt.p_one) {
            if (!(p >= 0.0 && p <= 1.0)) throw InputError("ground truth: probability outside [0,1]");
        }
        cpt.unseen.assign(cpt.p_one.size(), 0);
    }
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (truth.cpts.per_node[v].p_one.empty()) {
            throw InputError("ground truth: missing cpt for " + nodes[v].name());
        }
    }
    if (!truth.dag.is_acyclic()) throw InputError("ground truth: structure is cyclic");

    for (const auto& [name, value] : doc.at("schedule").items()) {
        const auto id = ResourceId::parse(name);
        if (!id) throw InputError("ground truth: bad schedule name");
        const auto release = parse_timestamp(value.get<std::string>());
        if (!release) throw InputError("ground truth: bad release time for " + name);
        truth.schedule.release[*id] = *release;
    }
    return truth;
}

GroundTruth load_ground_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("ground truth: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ground_truth_from_json(buffer.str());
}

}  // namespace lanet
