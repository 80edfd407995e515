#include "lanet/report.hpp"

#include <algorithm>
#include <cstdio>

#include "lanet/errors.hpp"

namespace lanet {

namespace {

const char* fill_color(ResourceKind kind) {
    switch (kind) {
        case ResourceKind::Quiz: return "blue";
        case ResourceKind::Video: return "green";
        case ResourceKind::LectureNotes: return "orange";
        case ResourceKind::Submission: return "pink";
    }
    return "gray";
}

std::string fmt(double value, const char* format = "%.4f") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), format, value);
    return buf;
}

std::string escape_cell(const std::string& text) {
    std::string out;
    for (char c : text) {
        if (c == '|') out += "\\|";
        else out.push_back(c);
    }
    return out;
}

}  // namespace

std::string to_dot(const ConsensusNetwork& consensus) {
    std::string out = "digraph engagement {\n";
    out += "  rankdir=LR;\n";
    out += "  node [style=filled];\n";
    for (const auto& node : consensus.dag.nodes()) {
        out += "  \"" + node.name() + "\" [fillcolor=\"" + fill_color(node.kind) + "\"];\n";
    }
    for (const auto& [s, t] : consensus.dag.arcs()) {
        const auto& src = consensus.dag.nodes()[static_cast<std::size_t>(s)];
        const auto& tgt = consensus.dag.nodes()[static_cast<std::size_t>(t)];
        const double strength = consensus.strengths.get(src, tgt);
        out += "  \"" + src.name() + "\" -> \"" + tgt.name() + "\" [penwidth=" +
               fmt(1.0 + 4.0 * strength, "%.2f") + ", label=\"" + fmt(strength, "%.2f") +
               "\"];\n";
    }
    out += "}\n";
    return out;
}

std::string summary_report(const ConsensusNetwork& consensus, const CptSet& cpts,
                           const EngagementMatrix& matrix,
                           const std::vector<ExcludedResource>& excluded,
                           const std::vector<Query>& queries, const RunInfo& info) {
    std::string md = "# Engagement network report\n\n";

    md += "## Run parameters\n\n";
    md += "| parameter | value |\n|---|---|\n";
    md += "| seed | " + std::to_string(info.seed) + " |\n";
    md += "| window_days | " + std::to_string(info.window_days) + " |\n";
    md += "| bootstrap iterations | " + std::to_string(info.iterations) + " |\n";
    md += "| strength threshold | " + fmt(info.threshold, "%.2f") + " |\n";
    md += "| cpt smoothing alpha | " + fmt(info.alpha, "%.2f") + " |\n";
    md += "| students | " + std::to_string(matrix.student_count()) + " |\n";
    md += "| resources analyzed | " + std::to_string(matrix.resource_count()) + " |\n";
    if (info.have_ingest) {
        md += "| log rows | " + std::to_string(info.log_rows_total) + " |\n";
        md += "| log rows mapped | " + std::to_string(info.log_rows_mapped) + " |\n";
    }
    md += "\n";

    md += "## Excluded resources\n\n";
    if (excluded.empty()) {
        md += "none\n\n";
    } else {
        md += "| resource | access rate |\n|---|---|\n";
        for (const auto& [id, rate] : excluded) {
            md += "| " + id.name() + " | " + fmt(rate) + " |\n";
        }
        md += "\n";
    }

    md += "## Consensus arcs\n\n";
    if (consensus.dag.arcs().empty()) {
        md += "none\n\n";
    } else {
        md += "| source | target | strength |\n|---|---|---|\n";
        for (const auto& [s, t] : consensus.dag.arcs()) {
            const auto& src = consensus.dag.nodes()[static_cast<std::size_t>(s)];
            const auto& tgt = consensus.dag.nodes()[static_cast<std::size_t>(t)];
            md += "| " + src.name() + " | " + tgt.name() + " | " +
                  fmt(consensus.strengths.get(src, tgt)) + " |\n";
        }
        md += "\n";
    }

    md += "### Arcs dropped to break cycles\n\n";
    if (consensus.dropped_for_cycles.empty()) {
        md += "none\n\n";
    } else {
        for (const auto& [src, tgt] : consensus.dropped_for_cycles) {
            md += "- " + src.name() + " -> " + tgt.name() + " (strength " +
                  fmt(consensus.strengths.get(src, tgt)) + ")\n";
        }
        md += "\n";
    }

    if (!queries.empty()) {
        md += "## Queries\n\n";
        md += "| query | model | empirical | support |\n|---|---|---|---|\n";
        for (const auto& query : queries) {
            std::string model_cell, empirical_cell, support_cell;
            try {
                model_cell = fmt(model_query(consensus.dag, cpts, query));
            } catch (const QueryError&) {
                model_cell = "n/a";
            }
            try {
                const EmpiricalResult r = empirical_conditional(matrix, query);
                empirical_cell = fmt(r.probability);
                support_cell = std::to_string(r.support);
            } catch (const QueryError&) {
                empirical_cell = "n/a";
                support_cell = "0";
            }
            md += "| " + escape_cell(query.to_string()) + " | " + model_cell + " | " +
                  empirical_cell + " | " + support_cell + " |\n";
        }
        md += "\n";
    }
    return md;
}

}  // namespace lanet
