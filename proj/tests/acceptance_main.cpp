// Acceptance suite: one pass/fail line per criterion, exit 0 only if all
// pass. Statistical criteria run on pinned seeds so the suite is
// deterministic.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lanet/infer.hpp"
#include "lanet/rng.hpp"
#include "lanet/pipeline.hpp"
#include "lanet/search.hpp"
#include "lanet/sensitivity.hpp"
#include "lanet/synthetic.hpp"

using namespace lanet;

namespace {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

ResourceId rid(const std::string& name) { return *ResourceId::parse(name); }

EngagementMatrix matrix_from_cells(const std::vector<ResourceId>& resources,
                                   std::vector<std::uint8_t> cells, std::size_t students) {
    std::vector<std::string> ids;
    char name[16];
    for (std::size_t i = 0; i < students; ++i) {
        std::snprintf(name, sizeof(name), "s%05zu", i);
        ids.emplace_back(name);
    }
    return EngagementMatrix(std::move(ids), resources, std::move(cells));
}

std::vector<ResourceId> random_node_set(Rng& rng, std::size_t count, int max_chapter) {
    std::set<ResourceId> nodes;
    while (nodes.size() < count) {
        const auto kind = static_cast<ResourceKind>(rng.next_below(4));
        const int chapter = 1 + static_cast<int>(rng.next_below(
                                    static_cast<std::uint64_t>(max_chapter)));
        nodes.insert(ResourceId{kind, chapter});
    }
    return {nodes.begin(), nodes.end()};
}

/// Random tier-legal DAG with random tables, for data generation.
struct RandomModel {
    Dag dag;
    CptSet cpts;
};

RandomModel random_model(const std::vector<ResourceId>& nodes, Rng& rng, double p_lo,
                         double p_hi) {
    RandomModel model;
    model.dag = Dag(nodes);
    const int n = static_cast<int>(nodes.size());
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t || !allowed_arc(nodes[static_cast<std::size_t>(s)],
                                       nodes[static_cast<std::size_t>(t)])) {
                continue;
            }
            if (!rng.next_bernoulli(0.35)) continue;
            model.dag.add_arc(s, t);
            if (!model.dag.is_acyclic()) model.dag.remove_arc(s, t);
        }
    }
    model.cpts.alpha = 0.0;
    model.cpts.per_node.resize(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        NodeCpt& cpt = model.cpts.per_node[v];
        cpt.parents = model.dag.parents_of(static_cast<int>(v));
        cpt.p_one.resize(std::size_t{1} << cpt.parents.size());
        cpt.unseen.assign(cpt.p_one.size(), 0);
        for (double& p : cpt.p_one) p = p_lo + (p_hi - p_lo) * rng.next_double();
    }
    return model;
}

EngagementMatrix sample_from_model(const RandomModel& model, std::size_t rows, Rng& rng) {
    const auto order = model.dag.topological_order();
    const std::size_t width = model.dag.node_count();
    std::vector<std::uint8_t> cells(rows * width, 0);
    std::vector<std::uint8_t> row(width, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (int v : *order) {
            const NodeCpt& cpt = model.cpts.per_node[static_cast<std::size_t>(v)];
            std::size_t cfg = 0;
            for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
                cfg |= static_cast<std::size_t>(row[static_cast<std::size_t>(cpt.parents[i])])
                       << i;
            }
            row[static_cast<std::size_t>(v)] = rng.next_bernoulli(cpt.p_one[cfg]) ? 1 : 0;
        }
        std::copy(row.begin(), row.end(), cells.begin() + static_cast<std::ptrdiff_t>(r * width));
    }
    return matrix_from_cells(model.dag.nodes(), std::move(cells), rows);
}

/// Independent inference oracle: conditional from the full joint table over
/// every node of the dag, no ancestral-set shortcut.
double joint_table_conditional(const Dag& dag, const CptSet& cpts, const Query& query) {
    const std::size_t n = dag.node_count();
    double evidence_mass = 0.0, joint_mass = 0.0;
    for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << n); ++assignment) {
        double p = 1.0;
        for (std::size_t v = 0; v < n; ++v) {
            const NodeCpt& cpt = cpts.per_node[v];
            std::size_t cfg = 0;
            for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
                cfg |= (assignment >> cpt.parents[i] & 1) << i;
            }
            const double p1 = cpt.p_one[cfg];
            p *= (assignment >> v & 1) ? p1 : 1.0 - p1;
        }
        bool consistent = true;
        for (const auto& [id, value] : query.evidence) {
            if (static_cast<int>(assignment >> dag.index_of(id) & 1) != value) {
                consistent = false;
                break;
            }
        }
        if (!consistent) continue;
        evidence_mass += p;
        if (static_cast<int>(assignment >> dag.index_of(query.target) & 1) ==
            query.target_value) {
            joint_mass += p;
        }
    }
    return joint_mass / evidence_mass;
}

bool network_is_legal(const Dag& dag) { return dag.is_acyclic() && dag.tier_legal(); }

// ---------------------------------------------------------------------------

CriterionResult criterion_oracle_equivalence(std::vector<Dag>& learned_pool) {
    CriterionResult result{1, "hill climb matches the exhaustive oracle", false, 0, ""};
    Stopwatch clock;
    Rng rng(101);
    const int trials = 200;
    int matched = 0;
    bool never_exceeds = true;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t node_count = 2 + rng.next_below(3);  // 2..4
        const auto nodes = random_node_set(rng, node_count, 3);
        EngagementMatrix data = [&] {
            if (trial % 2 == 0) {
                // iid noise with a random density per column
                std::vector<std::uint8_t> cells(50 * nodes.size());
                std::vector<double> density(nodes.size());
                for (auto& d : density) d = 0.2 + 0.6 * rng.next_double();
                for (std::size_t r = 0; r < 50; ++r) {
                    for (std::size_t c = 0; c < nodes.size(); ++c) {
                        cells[r * nodes.size() + c] = rng.next_bernoulli(density[c]) ? 1 : 0;
                    }
                }
                return matrix_from_cells(nodes, std::move(cells), 50);
            }
            const RandomModel model = random_model(nodes, rng, 0.1, 0.9);
            return sample_from_model(model, 50, rng);
        }();
        SearchParams params;
        params.seed = static_cast<std::uint64_t>(trial);
        const ScoredNetwork hc = hill_climb(data, params);
        const ScoredNetwork ex = exhaustive_best(data, nodes);
        learned_pool.push_back(hc.dag);
        if (hc.score > ex.score + 1e-9) never_exceeds = false;
        if (hc.score >= ex.score - 1e-9) ++matched;
    }
    result.seconds = clock.seconds();
    result.pass = never_exceeds && matched >= 190 && result.seconds < 30.0;
    result.detail = fmt("matched %d/%d, never exceeded: %s", matched, trials,
                        never_exceeds ? "yes" : "no");
    return result;
}

CriterionResult criterion_query_reproduction() {
    CriterionResult result{3, "preset cohort reproduces the target conditionals", false, 0, ""};
    Stopwatch clock;
    const GroundTruth truth = reference_preset();
    const EngagementMatrix cohort = sample_cohort(truth, 20000, 8675309);
    const std::vector<std::pair<std::string, double>> targets = {
        {"P(sub_6=1 | sub_5=1)", 0.80},  {"P(sub_8=1 | sub_6=1, sub_7=1)", 0.85},
        {"P(sub_7=1 | vid_7=1)", 0.83},  {"P(vid_4=1 | vid_3=1)", 0.82},
        {"P(quiz_2=1 | quiz_1=0)", 0.14}, {"P(quiz_3=1 | quiz_2=0)", 0.07},
    };
    bool all_ok = true;
    std::string worst;
    double worst_gap = 0.0;
    for (const auto& [text, expected] : targets) {
        const EmpiricalResult r = empirical_conditional(cohort, parse_query(text));
        const double gap = std::fabs(r.probability - expected);
        if (gap > worst_gap) {
            worst_gap = gap;
            worst = fmt("%s = %.4f (target %.2f)", text.c_str(), r.probability, expected);
        }
        if (gap > 0.02) all_ok = false;
    }
    result.seconds = clock.seconds();
    result.pass = all_ok && result.seconds < 10.0;
    result.detail = fmt("largest gap %.4f at %s", worst_gap, worst.c_str());
    return result;
}

CriterionResult criterion_structure_recovery(std::vector<Dag>& learned_pool) {
    CriterionResult result{4, "strong preset arcs recovered at cohort scale", false, 0, ""};
    Stopwatch clock;
    const GroundTruth truth = reference_preset();

    // Ground-truth contrast per arc: |P(child=1|parent=1) - P(child=1|parent=0)|
    // under the preset model (equals the CPT contrast for single-parent
    // children).
    std::vector<NamedArc> strong;
    for (const auto& [s, t] : truth.dag.arcs()) {
        const auto& src = truth.dag.nodes()[static_cast<std::size_t>(s)];
        const auto& tgt = truth.dag.nodes()[static_cast<std::size_t>(t)];
        Query on, off;
        on.target = tgt;
        on.evidence[src] = 1;
        off.target = tgt;
        off.evidence[src] = 0;
        const double contrast = std::fabs(model_query(truth.dag, truth.cpts, on) -
                                          model_query(truth.dag, truth.cpts, off));
        if (contrast >= 0.3) strong.push_back({src, tgt});
    }

    const int seeds = 10;
    std::vector<int> recovered(strong.size(), 0);
    bool all_legal = true;
    std::mutex pool_mutex;
    for (int seed = 1; seed <= seeds; ++seed) {
        const EngagementMatrix cohort =
            sample_cohort(truth, 204, 5000 + static_cast<std::uint64_t>(seed));
        BootstrapOptions options;
        options.iterations = 100;
        options.threshold = 0.5;
        options.workers = 2;
        options.observer = [&](int, const ScoredNetwork& net) {
            // estimate_strengths serializes observer calls
            learned_pool.push_back(net.dag);
        };
        SearchParams params;
        params.seed = static_cast<std::uint64_t>(seed);
        const ConsensusNetwork consensus = bootstrap_learn(cohort, options, params);
        if (!network_is_legal(consensus.dag)) all_legal = false;
        for (std::size_t a = 0; a < strong.size(); ++a) {
            const int u = consensus.dag.index_of(strong[a].first);
            const int v = consensus.dag.index_of(strong[a].second);
            if (consensus.dag.has_arc(u, v) || consensus.dag.has_arc(v, u)) ++recovered[a];
        }
    }
    int weakest = seeds;
    std::string weakest_name = "-";
    bool all_recovered = true;
    for (std::size_t a = 0; a < strong.size(); ++a) {
        if (recovered[a] < weakest) {
            weakest = recovered[a];
            weakest_name = strong[a].first.name() + "->" + strong[a].second.name();
        }
        if (recovered[a] < 8) all_recovered = false;
    }
    result.seconds = clock.seconds();
    result.pass = all_recovered && all_legal && result.seconds < 300.0;
    result.detail = fmt("%zu strong arcs, weakest %s in %d/%d seeds", strong.size(),
                        weakest_name.c_str(), weakest, seeds);
    return result;
}

CriterionResult criterion_constraints(const std::vector<Dag>& learned_pool) {
    CriterionResult result{2, "every learned network is acyclic and forward-only", false, 0, ""};
    Stopwatch clock;
    std::size_t violations = 0;
    for (const auto& dag : learned_pool) {
        if (!network_is_legal(dag)) ++violations;
    }
    result.seconds = clock.seconds();
    result.pass = learned_pool.size() >= 1000 && violations == 0;
    result.detail = fmt("%zu networks checked, %zu violations", learned_pool.size(), violations);
    return result;
}

CriterionResult criterion_determinism() {
    CriterionResult result{5, "pipeline outputs byte-identical across worker counts", false, 0,
                           ""};
    Stopwatch clock;
    const std::string fixtures = LANET_FIXTURE_DIR;
    const std::string scratch = std::filesystem::temp_directory_path().string();
    PipelineOptions base;
    base.log_path = fixtures + "/activity_log.csv";
    base.config_path = fixtures + "/course_config.json";
    base.seed = 42;
    base.iterations = 100;
    base.query_texts = {"P(sub_6=1 | sub_5=1)"};
    PipelineOptions serial = base;
    serial.out_dir = scratch + "/lanet_acc5_serial";
    serial.workers = 1;
    PipelineOptions parallel = base;
    parallel.out_dir = scratch + "/lanet_acc5_parallel";
    parallel.workers = 8;
    run_pipeline(serial);
    run_pipeline(parallel);
    bool identical = true;
    std::string first_diff;
    for (const char* name :
         {"matrix.csv", "strengths.csv", "consensus.json", "network.dot", "report.md"}) {
        if (read_file(serial.out_dir + "/" + name) != read_file(parallel.out_dir + "/" + name)) {
            identical = false;
            if (first_diff.empty()) first_diff = name;
        }
    }
    std::error_code ec;
    std::filesystem::remove_all(serial.out_dir, ec);
    std::filesystem::remove_all(parallel.out_dir, ec);
    result.seconds = clock.seconds();
    result.pass = identical;
    result.detail = identical ? "5 artifacts identical with 1 and 8 workers"
                              : "first differing file: " + first_diff;
    return result;
}

CriterionResult criterion_round_trip() {
    CriterionResult result{6, "emitted logs rebuild matrices; decoy counts match", false, 0, ""};
    Stopwatch clock;
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    Rng rng(606060);
    int exact = 0;
    const int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        const std::size_t students = 1 + rng.next_below(30);
        const double density = 0.15 + 0.7 * rng.next_double();
        std::vector<std::uint8_t> cells(students * truth.dag.node_count(), 0);
        for (std::size_t r = 0; r < students; ++r) {
            bool any = false;
            for (std::size_t c = 0; c < truth.dag.node_count(); ++c) {
                const bool on = rng.next_bernoulli(density);
                cells[r * truth.dag.node_count() + c] = on ? 1 : 0;
                any = any || on;
            }
            if (!any) {
                // a silent student emits no rows; give the row one click
                cells[r * truth.dag.node_count() + rng.next_below(truth.dag.node_count())] = 1;
            }
        }
        const EngagementMatrix m =
            matrix_from_cells(truth.dag.nodes(), std::move(cells), students);
        const auto events = emit_logs(m, truth.schedule, rng.next_u64());
        if (build_matrix(events, truth.schedule, config) == m) ++exact;
    }

    // Decoys on: diagnostics must report the configured expectation +-10%.
    const EngagementMatrix cohort = sample_cohort(truth, 204, 909090);
    EmitOptions options;
    options.unmappable_rate = 0.4;
    const SyntheticLog log = emit_log_rows(cohort, truth.schedule, 909090, options);
    std::istringstream in(synthetic_log_to_csv(log, config));
    const ParsedLog parsed = parse_log_stream(in, config);
    const double expectation = 0.4 * static_cast<double>(log.engagement_count);
    const double deviation =
        std::fabs(static_cast<double>(parsed.diagnostics.unmapped) - expectation);
    const bool decoys_ok = deviation <= 0.1 * expectation;

    result.seconds = clock.seconds();
    result.pass = exact == trials && decoys_ok;
    result.detail = fmt("%d/%d exact round trips; %zu decoys vs %.0f expected", exact, trials,
                        parsed.diagnostics.unmapped, expectation);
    return result;
}

CriterionResult criterion_exclusion() {
    CriterionResult result{7, "high-access exclusion: strict at the default 0.95", false, 0, ""};
    Stopwatch clock;
    std::vector<std::uint8_t> cells;
    for (int i = 0; i < 100; ++i) {
        cells.push_back(i < 96 ? 1 : 0);  // vid_1 at 0.96
        cells.push_back(i < 95 ? 1 : 0);  // quiz_1 at exactly 0.95
    }
    const EngagementMatrix m =
        matrix_from_cells({rid("vid_1"), rid("quiz_1")}, std::move(cells), 100);
    const CourseConfig defaults{};
    const ExclusionResult exclusion = exclude_high_access(m, defaults.exclusion_rate);
    const bool threshold_default = defaults.exclusion_rate == 0.95;
    const bool excluded_96 = exclusion.excluded.size() == 1 &&
                             exclusion.excluded[0].first == rid("vid_1");
    const bool retained_95 = exclusion.matrix.resource_count() == 1 &&
                             exclusion.matrix.resources()[0] == rid("quiz_1");
    result.seconds = clock.seconds();
    result.pass = threshold_default && excluded_96 && retained_95;
    result.detail = fmt("default rate %.2f, 0.96 excluded: %s, 0.95 retained: %s",
                        defaults.exclusion_rate, excluded_96 ? "yes" : "no",
                        retained_95 ? "yes" : "no");
    return result;
}

CriterionResult criterion_inference() {
    CriterionResult result{8, "exact inference equals joint-table enumeration", false, 0, ""};
    Stopwatch clock;
    Rng rng(484848);
    double worst = 0.0;
    int compared = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t node_count = 2 + rng.next_below(4);  // 2..5
        const auto nodes = random_node_set(rng, node_count, 3);
        const RandomModel model = random_model(nodes, rng, 0.05, 0.95);
        for (int q = 0; q < 4; ++q) {
            Query query;
            query.target = nodes[rng.next_below(nodes.size())];
            query.target_value = static_cast<int>(rng.next_below(2));
            for (const auto& node : nodes) {
                if (node == query.target || !rng.next_bernoulli(0.4)) continue;
                query.evidence[node] = static_cast<int>(rng.next_below(2));
            }
            const double fast = model_query(model.dag, model.cpts, query);
            const double slow = joint_table_conditional(model.dag, model.cpts, query);
            worst = std::max(worst, std::fabs(fast - slow));
            ++compared;
        }
    }
    result.seconds = clock.seconds();
    result.pass = worst <= 1e-12;
    result.detail = fmt("%d queries over 50 networks, worst |diff| = %.2e", compared, worst);
    return result;
}

CriterionResult criterion_sensitivity() {
    CriterionResult result{9, "window sensitivity sweep yields a valid jaccard matrix", false, 0,
                           ""};
    Stopwatch clock;
    const GroundTruth truth = reference_preset();
    const CourseConfig config = default_course_config(truth);
    const EngagementMatrix cohort = sample_cohort(truth, 204, 321321);
    EmitOptions emit;
    emit.spread_days = 21;
    const auto events = emit_logs(cohort, truth.schedule, 321321, emit);

    SensitivityOptions options;
    options.windows = {7, 10, 14, 17, 21};
    options.exclusion_rate = config.exclusion_rate;
    options.bootstrap.iterations = 100;
    options.bootstrap.workers = 2;
    options.params.seed = 9;
    const SensitivityReport report = run_sensitivity(events, config, options);

    bool valid = report.jaccard.size() == 5;
    for (std::size_t i = 0; valid && i < report.jaccard.size(); ++i) {
        if (std::fabs(report.jaccard[i][i] - 1.0) > 1e-12) valid = false;
        for (std::size_t j = 0; valid && j < report.jaccard.size(); ++j) {
            const double value = report.jaccard[i][j];
            if (value < 0.0 || value > 1.0) valid = false;
            if (std::fabs(value - report.jaccard[j][i]) > 1e-12) valid = false;
        }
    }
    result.seconds = clock.seconds();
    result.pass = valid && result.seconds < 120.0;
    result.detail = fmt("5x5 matrix, j(7,21) = %.3f",
                        report.jaccard.empty() ? -1.0 : report.jaccard[0][4]);
    return result;
}

}  // namespace

int main() {
    std::vector<Dag> learned_pool;
    std::vector<CriterionResult> results;
    results.push_back(criterion_oracle_equivalence(learned_pool));
    results.push_back(criterion_query_reproduction());
    results.push_back(criterion_structure_recovery(learned_pool));
    results.push_back(criterion_constraints(learned_pool));
    results.push_back(criterion_determinism());
    results.push_back(criterion_round_trip());
    results.push_back(criterion_exclusion());
    results.push_back(criterion_inference());
    results.push_back(criterion_sensitivity());

    std::sort(results.begin(), results.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s (%.1fs) — %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.detail.c_str());
        all_pass = all_pass && r.pass;
    }
    std::printf("%s\n", all_pass ? "acceptance: all criteria passed"
                                 : "acceptance: FAILURES present");
    return all_pass ? 0 : 1;
}
