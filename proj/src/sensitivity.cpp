#include "lanet/sensitivity.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace lanet {

using nlohmann::json;

namespace {

std::set<NamedArc> retained_arcs(const ConsensusNetwork& consensus) {
    std::set<NamedArc> out;
    for (const auto& [s, t] : consensus.dag.arcs()) {
        out.insert({consensus.dag.nodes()[static_cast<std::size_t>(s)],
                    consensus.dag.nodes()[static_cast<std::size_t>(t)]});
    }
    return out;
}

double jaccard_similarity(const std::set<NamedArc>& a, const std::set<NamedArc>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t intersection = 0;
    for (const auto& arc : a) intersection += b.count(arc);
    const std::size_t union_size = a.size() + b.size() - intersection;
    return static_cast<double>(intersection) / static_cast<double>(union_size);
}

}  // namespace

SensitivityReport run_sensitivity(const std::vector<ActivityEvent>& events,
                                  const CourseConfig& config,
                                  const SensitivityOptions& options) {
    if (options.windows.size() < 2) {
        throw std::invalid_argument("sensitivity needs at least 2 windows");
    }
    for (int w : options.windows) {
        if (w <= 0) throw std::invalid_argument("windows must be positive");
    }

    SensitivityReport report;
    report.windows = options.windows;
    const ReleaseSchedule schedule = config.schedule();

    std::vector<std::set<NamedArc>> edge_sets;
    for (int window : options.windows) {
        CourseConfig windowed = config;
        windowed.window_days = window;
        const EngagementMatrix full = build_matrix(events, schedule, windowed);
        const ExclusionResult pruned = exclude_high_access(full, options.exclusion_rate);
        ConsensusNetwork consensus =
            bootstrap_learn(pruned.matrix, options.bootstrap, options.params);
        edge_sets.push_back(retained_arcs(consensus));
        report.per_window.push_back(std::move(consensus));
    }

    std::set<NamedArc> union_arcs;
    for (const auto& set : edge_sets) union_arcs.insert(set.begin(), set.end());
    report.grid_arcs.assign(union_arcs.begin(), union_arcs.end());
    report.grid.resize(report.grid_arcs.size(),
                       std::vector<double>(report.windows.size(), 0.0));
    for (std::size_t a = 0; a < report.grid_arcs.size(); ++a) {
        const auto& [src, tgt] = report.grid_arcs[a];
        for (std::size_t w = 0; w < report.windows.size(); ++w) {
            report.grid[a][w] = report.per_window[w].strengths.get(src, tgt);
        }
    }

    report.jaccard.resize(report.windows.size(),
                          std::vector<double>(report.windows.size(), 0.0));
    for (std::size_t i = 0; i < edge_sets.size(); ++i) {
        for (std::size_t j = 0; j < edge_sets.size(); ++j) {
            report.jaccard[i][j] = jaccard_similarity(edge_sets[i], edge_sets[j]);
        }
    }
    return report;
}

std::string sensitivity_to_json(const SensitivityReport& report) {
    json doc;
    doc["windows"] = report.windows;
    doc["jaccard"] = report.jaccard;
    doc["arcs"] = json::array();
    for (std::size_t a = 0; a < report.grid_arcs.size(); ++a) {
        json entry;
        entry["source"] = report.grid_arcs[a].first.name();
        entry["target"] = report.grid_arcs[a].second.name();
        entry["strengths"] = report.grid[a];
        doc["arcs"].push_back(entry);
    }
    doc["per_window"] = json::array();
    for (std::size_t w = 0; w < report.windows.size(); ++w) {
        json entry;
        entry["window_days"] = report.windows[w];
        entry["arcs"] = json::array();
        const auto& consensus = report.per_window[w];
        std::vector<std::pair<std::string, std::string>> arcs;
        for (const auto& [s, t] : consensus.dag.arcs()) {
            arcs.emplace_back(consensus.dag.nodes()[static_cast<std::size_t>(s)].name(),
                              consensus.dag.nodes()[static_cast<std::size_t>(t)].name());
        }
        std::sort(arcs.begin(), arcs.end());
        for (const auto& [s, t] : arcs) entry["arcs"].push_back({s, t});
        doc["per_window"].push_back(entry);
    }
    return doc.dump(2) + "\n";
}

std::string sensitivity_grid_to_csv(const SensitivityReport& report) {
    std::string out = "source,target";
    for (int w : report.windows) out += ",w" + std::to_string(w);
    out += "\n";
    char buf[32];
    for (std::size_t a = 0; a < report.grid_arcs.size(); ++a) {
        out += report.grid_arcs[a].first.name() + "," + report.grid_arcs[a].second.name();
        for (double strength : report.grid[a]) {
            std::snprintf(buf, sizeof(buf), ",%.4f", strength);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace lanet
