// lanet: from LMS activity logs to a bootstrap-averaged Bayesian network of
// resource engagement. Subcommands cover the full pipeline plus the pieces:
// simulate, ingest, matrix, learn, query, sensitivity, report, pipeline.
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lanet/bootstrap.hpp"
#include "lanet/errors.hpp"
#include "lanet/infer.hpp"
#include "lanet/pipeline.hpp"
#include "lanet/sensitivity.hpp"
#include "lanet/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

struct CommonFlags {
    std::string log_path;
    std::string config_path;
    std::uint64_t seed = 1;
    int window_days = 0;
    int iterations = 100;
    double threshold = 0.5;
    int workers = 1;
};

void add_learning_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Seed for all randomness");
    cmd->add_option("--window-days", flags.window_days,
                    "Synchronous window override (default: config value)");
    cmd->add_option("--iterations", flags.iterations, "Bootstrap iterations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", flags.threshold, "Arc strength retention threshold");
    cmd->add_option("--workers", flags.workers, "Parallel bootstrap workers")
        ->check(CLI::PositiveNumber);
}

lanet::CourseConfig load_windowed_config(const CommonFlags& flags) {
    lanet::CourseConfig config = lanet::load_config(flags.config_path);
    if (flags.window_days > 0) config.window_days = flags.window_days;
    return config;
}

std::string diagnostics_json(const lanet::IngestDiagnostics& d) {
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "{\"total\": %zu, \"mapped\": %zu, \"unmapped\": %zu, "
                  "\"malformed_time\": %zu}\n",
                  d.total, d.mapped, d.unmapped, d.malformed_time);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Engagement network toolkit: learn a bootstrap-averaged Bayesian network "
                 "of course-resource engagement from LMS activity logs"};
    app.require_subcommand(1);

    // --- simulate ----------------------------------------------------------
    auto* simulate = app.add_subcommand(
        "simulate", "Generate a synthetic cohort, activity log, and config from a known model");
    struct {
        std::string out_dir;
        std::string truth_path;
        std::size_t students = 204;
        std::uint64_t seed = 1;
        int spread_days = 14;
        double async_rate = 0.0;
        double decoy_rate = 0.0;
    } sim;
    simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();
    simulate->add_option("--students", sim.students, "Cohort size")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Seed for all randomness");
    simulate->add_option("--truth", sim.truth_path,
                         "Ground-truth JSON to sample from (default: built-in preset)");
    simulate->add_option("--spread-days", sim.spread_days,
                         "Spread of engagement clicks after release");
    simulate->add_option("--async-rate", sim.async_rate,
                         "Rate of pre-release decoy clicks per engagement event");
    simulate->add_option("--decoy-rate", sim.decoy_rate,
                         "Rate of unmappable decoy rows per engagement event");

    // --- ingest -------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "Parse an activity log and report diagnostics");
    struct {
        std::string log_path, config_path, events_out;
    } ing;
    ingest->add_option("--log", ing.log_path, "Activity log CSV")->required();
    ingest->add_option("--config", ing.config_path, "Course config JSON")->required();
    ingest->add_option("--events", ing.events_out, "Write normalized events CSV here");

    // --- matrix -------------------------------------------------------------
    auto* matrix_cmd =
        app.add_subcommand("matrix", "Build the binary engagement matrix from a log");
    CommonFlags mat;
    std::string matrix_out;
    matrix_cmd->add_option("--log", mat.log_path, "Activity log CSV")->required();
    matrix_cmd->add_option("--config", mat.config_path, "Course config JSON")->required();
    matrix_cmd->add_option("--out", matrix_out, "Matrix CSV path")->required();
    matrix_cmd->add_option("--window-days", mat.window_days,
                           "Synchronous window override (default: config value)");

    // --- learn --------------------------------------------------------------
    auto* learn = app.add_subcommand(
        "learn", "Bootstrap-learn the consensus network (from a log or a matrix CSV)");
    CommonFlags lrn;
    struct {
        std::string matrix_path, out_dir;
        double exclusion_rate = 0.0;  // 0 = config value (or 0.95 without config)
    } lrnx;
    learn->add_option("--log", lrn.log_path, "Activity log CSV");
    learn->add_option("--config", lrn.config_path, "Course config JSON");
    learn->add_option("--matrix", lrnx.matrix_path, "Engagement matrix CSV (skips ingest)");
    learn->add_option("--out-dir", lrnx.out_dir, "Output directory")->required();
    learn->add_option("--exclusion-rate", lrnx.exclusion_rate,
                      "High-access exclusion rate (1.0 disables)");
    add_learning_flags(learn, lrn);

    // --- query ---------------------------------------------------------------
    auto* query_cmd = app.add_subcommand(
        "query", "Answer P(target | evidence) from a consensus model and a matrix");
    struct {
        std::string matrix_path, consensus_path;
        double alpha = 1.0;
        std::vector<std::string> queries;
    } qry;
    query_cmd->add_option("--matrix", qry.matrix_path, "Engagement matrix CSV")->required();
    query_cmd->add_option("--consensus", qry.consensus_path, "Consensus JSON")->required();
    query_cmd->add_option("--alpha", qry.alpha, "CPT smoothing (Laplace) alpha");
    query_cmd->add_option("queries", qry.queries, "Queries like \"P(sub_6=1 | sub_5=1)\"")
        ->required();

    // --- pipeline -------------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand(
        "pipeline", "Full run: log -> matrix -> consensus -> artifacts + report");
    CommonFlags pip;
    struct {
        std::string out_dir;
        double alpha = 1.0;
        std::vector<std::string> queries;
    } pipx;
    pipeline_cmd->add_option("--log", pip.log_path, "Activity log CSV")->required();
    pipeline_cmd->add_option("--config", pip.config_path, "Course config JSON")->required();
    pipeline_cmd->add_option("--out-dir", pipx.out_dir, "Output directory")->required();
    pipeline_cmd->add_option("--alpha", pipx.alpha, "CPT smoothing alpha");
    pipeline_cmd->add_option("--query", pipx.queries,
                             "Query to answer in the report (repeatable)");
    add_learning_flags(pipeline_cmd, pip);

    // --- sensitivity ------------------------------------------------------------
    auto* sensitivity_cmd = app.add_subcommand(
        "sensitivity", "Re-learn under several synchronous windows and compare edge sets");
    CommonFlags sen;
    struct {
        std::string out_dir;
        std::vector<int> windows = {7, 10, 14, 17, 21};
    } senx;
    sensitivity_cmd->add_option("--log", sen.log_path, "Activity log CSV")->required();
    sensitivity_cmd->add_option("--config", sen.config_path, "Course config JSON")->required();
    sensitivity_cmd->add_option("--out-dir", senx.out_dir, "Output directory")->required();
    sensitivity_cmd->add_option("--windows", senx.windows, "Window lengths in days");
    add_learning_flags(sensitivity_cmd, sen);

    // --- report -----------------------------------------------------------------
    auto* report_cmd =
        app.add_subcommand("report", "Run the pipeline and write only the markdown report");
    CommonFlags rep;
    struct {
        std::string out_path;
        double alpha = 1.0;
        std::vector<std::string> queries;
    } repx;
    report_cmd->add_option("--log", rep.log_path, "Activity log CSV")->required();
    report_cmd->add_option("--config", rep.config_path, "Course config JSON")->required();
    report_cmd->add_option("--out", repx.out_path, "Report path")->required();
    report_cmd->add_option("--alpha", repx.alpha, "CPT smoothing alpha");
    report_cmd->add_option("--query", repx.queries, "Query to answer (repeatable)");
    add_learning_flags(report_cmd, rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            using namespace lanet;
            const GroundTruth truth =
                sim.truth_path.empty() ? reference_preset() : load_ground_truth(sim.truth_path);
            const CourseConfig config = default_course_config(truth);
            const EngagementMatrix cohort = sample_cohort(truth, sim.students, sim.seed);
            EmitOptions emit;
            emit.spread_days = sim.spread_days;
            emit.async_rate = sim.async_rate;
            emit.unmappable_rate = sim.decoy_rate;
            const SyntheticLog log = emit_log_rows(cohort, truth.schedule, sim.seed, emit);

            const std::filesystem::path out(sim.out_dir);
            write_file((out / "ground_truth.json").string(), ground_truth_to_json(truth));
            write_file((out / "config.json").string(), config_to_json(config));
            write_file((out / "cohort.csv").string(), matrix_to_csv(cohort));
            write_file((out / "log.csv").string(), synthetic_log_to_csv(log, config));
            std::cout << "wrote ground_truth.json, config.json, cohort.csv, log.csv to "
                      << sim.out_dir << "\n"
                      << "events: " << log.events.size() << " (engagement "
                      << log.engagement_count << ", async " << log.async_count
                      << "), unmappable rows: " << log.unmappable.size() << "\n";
        } else if (ingest->parsed()) {
            using namespace lanet;
            const CourseConfig config = load_config(ing.config_path);
            const ParsedLog parsed = parse_log(ing.log_path, config);
            std::cout << diagnostics_json(parsed.diagnostics);
            if (!ing.events_out.empty()) {
                std::string csv = "student_id,time,resource\n";
                for (const auto& e : parsed.events) {
                    csv += e.student_id + "," + format_iso(e.timestamp) + "," +
                           e.resource.name() + "\n";
                }
                write_file(ing.events_out, csv);
            }
        } else if (matrix_cmd->parsed()) {
            using namespace lanet;
            const CourseConfig config = load_windowed_config(mat);
            const ParsedLog parsed = parse_log(mat.log_path, config);
            const EngagementMatrix matrix =
                build_matrix(parsed.events, config.schedule(), config);
            write_file(matrix_out, matrix_to_csv(matrix));
            const ExclusionResult exclusion =
                exclude_high_access(matrix, config.exclusion_rate);
            std::cout << "students: " << matrix.student_count()
                      << ", resources: " << matrix.resource_count() << "\n";
            for (const auto& [id, rate] : exclusion.excluded) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.4f", rate);
                std::cout << "high-access (excluded at learn time): " << id.name() << " " << buf
                          << "\n";
            }
        } else if (learn->parsed()) {
            using namespace lanet;
            EngagementMatrix full;
            double exclusion_rate = lrnx.exclusion_rate;
            if (!lrnx.matrix_path.empty()) {
                full = load_matrix_csv(lrnx.matrix_path);
                if (exclusion_rate == 0.0) exclusion_rate = 0.95;
            } else {
                if (lrn.log_path.empty() || lrn.config_path.empty()) {
                    std::cerr << "learn: need either --matrix or both --log and --config\n";
                    return kExitUsage;
                }
                const CourseConfig config = load_windowed_config(lrn);
                const ParsedLog parsed = parse_log(lrn.log_path, config);
                full = build_matrix(parsed.events, config.schedule(), config);
                if (exclusion_rate == 0.0) exclusion_rate = config.exclusion_rate;
            }
            const ExclusionResult exclusion = exclude_high_access(full, exclusion_rate);
            if (exclusion.matrix.resource_count() < 2) {
                throw InputError("fewer than 2 resources survive the high-access exclusion; "
                                 "nothing to learn from");
            }
            BootstrapOptions bootstrap;
            bootstrap.iterations = lrn.iterations;
            bootstrap.threshold = lrn.threshold;
            bootstrap.workers = lrn.workers;
            SearchParams params;
            params.seed = lrn.seed;
            const ConsensusNetwork consensus =
                bootstrap_learn(exclusion.matrix, bootstrap, params);

            const std::filesystem::path out(lrnx.out_dir);
            write_file((out / "strengths.csv").string(),
                       strengths_to_csv(consensus.strengths));
            write_file((out / "consensus.json").string(), consensus_to_json(consensus));
            std::cout << "consensus arcs: " << consensus.dag.arc_count() << " of "
                      << consensus.strengths.strength.size() << " observed\n";
        } else if (query_cmd->parsed()) {
            using namespace lanet;
            const EngagementMatrix matrix = load_matrix_csv(qry.matrix_path);
            const ConsensusNetwork consensus =
                consensus_from_json(read_file(qry.consensus_path));
            for (const auto& node : consensus.dag.nodes()) {
                if (matrix.column_of(node) < 0) {
                    throw InputError("matrix is missing model node " + node.name());
                }
            }
            const CptSet cpts = fit_cpts(matrix, consensus.dag, qry.alpha);
            for (const auto& text : qry.queries) {
                const Query query = parse_query(text);
                char buf[160];
                double model = model_query(consensus.dag, cpts, query);
                const EmpiricalResult empirical = empirical_conditional(matrix, query);
                std::snprintf(buf, sizeof(buf), "%s  model=%.4f  empirical=%.4f  support=%zu\n",
                              query.to_string().c_str(), model, empirical.probability,
                              empirical.support);
                std::cout << buf;
            }
        } else if (pipeline_cmd->parsed()) {
            lanet::PipelineOptions options;
            options.log_path = pip.log_path;
            options.config_path = pip.config_path;
            options.out_dir = pipx.out_dir;
            options.window_days = pip.window_days;
            options.iterations = pip.iterations;
            options.threshold = pip.threshold;
            options.alpha = pipx.alpha;
            options.seed = pip.seed;
            options.workers = pip.workers;
            options.query_texts = pipx.queries;
            const lanet::PipelineResult result = lanet::run_pipeline(options);
            for (const auto& path : result.written) std::cout << "wrote " << path << "\n";
        } else if (sensitivity_cmd->parsed()) {
            using namespace lanet;
            const CourseConfig config = load_config(sen.config_path);
            const ParsedLog parsed = parse_log(sen.log_path, config);
            SensitivityOptions options;
            options.windows = senx.windows;
            options.exclusion_rate = config.exclusion_rate;
            options.bootstrap.iterations = sen.iterations;
            options.bootstrap.threshold = sen.threshold;
            options.bootstrap.workers = sen.workers;
            options.params.seed = sen.seed;
            const SensitivityReport report =
                run_sensitivity(parsed.events, config, options);

            const std::filesystem::path out(senx.out_dir);
            write_file((out / "sensitivity.json").string(), sensitivity_to_json(report));
            write_file((out / "sensitivity_grid.csv").string(),
                       sensitivity_grid_to_csv(report));
            std::cout << "jaccard matrix (windows";
            for (int w : report.windows) std::cout << " " << w;
            std::cout << "):\n";
            for (const auto& row : report.jaccard) {
                for (std::size_t j = 0; j < row.size(); ++j) {
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "%s%.3f", j ? " " : "", row[j]);
                    std::cout << buf;
                }
                std::cout << "\n";
            }
        } else if (report_cmd->parsed()) {
            using namespace lanet;
            // Reuse the pipeline but route every artifact except the report to
            // a scratch directory next to the report file.
            PipelineOptions options;
            options.log_path = rep.log_path;
            options.config_path = rep.config_path;
            const auto stamp =
                std::chrono::steady_clock::now().time_since_epoch().count();
            const std::filesystem::path scratch =
                std::filesystem::temp_directory_path() /
                ("lanet-report-" + std::to_string(::getpid()) + "-" + std::to_string(stamp));
            options.out_dir = scratch.string();
            options.window_days = rep.window_days;
            options.iterations = rep.iterations;
            options.threshold = rep.threshold;
            options.alpha = repx.alpha;
            options.seed = rep.seed;
            options.workers = rep.workers;
            options.query_texts = repx.queries;
            run_pipeline(options);
            write_file(repx.out_path, read_file((scratch / "report.md").string()));
            std::error_code ec;
            std::filesystem::remove_all(scratch, ec);
            std::cout << "wrote " << repx.out_path << "\n";
        }
    } catch (const lanet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const lanet::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const lanet::QueryError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitOk;
}
