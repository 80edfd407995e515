#include "lanet/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lanet/errors.hpp"
#include "lanet/infer.hpp"

namespace lanet {

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw InputError("cannot create directory " + p.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed for " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

PipelineResult run_pipeline(const PipelineOptions& options) {
    CourseConfig config = load_config(options.config_path);
    if (options.window_days > 0) config.window_days = options.window_days;

    std::vector<Query> queries;
    queries.reserve(options.query_texts.size());
    for (const auto& text : options.query_texts) queries.push_back(parse_query(text));

    PipelineResult result;
    ParsedLog parsed = parse_log(options.log_path, config);
    result.diagnostics = parsed.diagnostics;
    if (parsed.events.empty()) {
        std::string message =
            "log: no rows matched any mapping rule; check the config's mapping_rules (";
        for (std::size_t i = 0; i < config.mapping_rules.size(); ++i) {
            if (i) message += ", ";
            const auto& rule = config.mapping_rules[i];
            message += rule.resource.name() + ": context~\"" + rule.context_contains +
                       "\" event~\"" + rule.event_contains + "\"";
        }
        message += ")";
        throw InputError(message);
    }

    result.full_matrix = build_matrix(parsed.events, config.schedule(), config);
    result.exclusion = exclude_high_access(result.full_matrix, config.exclusion_rate);
    const EngagementMatrix& analyzed = result.exclusion.matrix;
    if (analyzed.resource_count() < 2) {
        throw InputError("fewer than 2 resources survive the high-access exclusion; "
                         "nothing to learn from");
    }

    BootstrapOptions bootstrap;
    bootstrap.iterations = options.iterations;
    bootstrap.threshold = options.threshold;
    bootstrap.workers = options.workers;
    SearchParams params;
    params.seed = options.seed;
    result.consensus = bootstrap_learn(analyzed, bootstrap, params);
    result.cpts = fit_cpts(analyzed, result.consensus.dag, options.alpha);

    RunInfo info;
    info.seed = options.seed;
    info.window_days = config.window_days;
    info.iterations = options.iterations;
    info.threshold = options.threshold;
    info.alpha = options.alpha;
    info.log_rows_total = parsed.diagnostics.total;
    info.log_rows_mapped = parsed.diagnostics.mapped;
    info.have_ingest = true;

    const std::filesystem::path out_dir(options.out_dir);
    const auto emit = [&](const char* name, const std::string& content) {
        const std::string path = (out_dir / name).string();
        write_file(path, content);
        result.written.push_back(path);
    };
    emit("matrix.csv", matrix_to_csv(result.full_matrix));
    emit("strengths.csv", strengths_to_csv(result.consensus.strengths));
    emit("consensus.json", consensus_to_json(result.consensus));
    emit("network.dot", to_dot(result.consensus));
    emit("report.md", summary_report(result.consensus, result.cpts, analyzed,
                                     result.exclusion.excluded, queries, info));
    return result;
}

}  // namespace lanet
