#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lanet/pipeline.hpp"
#include "test_util.hpp"

using namespace lanet;

namespace {

const std::string kFixtures = LANET_FIXTURE_DIR;
const std::string kGolden = LANET_GOLDEN_DIR;
const std::string kCli = LANET_CLI_PATH;

PipelineOptions fixture_options(const std::string& out_dir) {
    PipelineOptions options;
    options.log_path = kFixtures + "/activity_log.csv";
    options.config_path = kFixtures + "/course_config.json";
    options.out_dir = out_dir;
    options.iterations = 40;
    options.seed = 20221003;
    options.query_texts = {"P(sub_6=1 | sub_5=1)", "P(quiz_3=1 | quiz_2=0)"};
    return options;
}

int run_cli(const std::string& args) {
    const std::string command = kCli + " " + args;
    const int status = std::system(command.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("pipeline output matches the versioned goldens byte for byte") {
    test::TempDir tmp("golden");
    const PipelineResult result = run_pipeline(fixture_options(tmp.path().string()));
    REQUIRE(result.written.size() == 5);
    for (const char* name :
         {"matrix.csv", "strengths.csv", "consensus.json", "network.dot", "report.md"}) {
        const std::string actual = read_file(tmp.file(name));
        const std::string expected = read_file(kGolden + "/pipeline/" + name);
        CHECK_MESSAGE(actual == expected, name);
    }
}

TEST_CASE("pipeline is byte-identical across worker counts") {
    test::TempDir serial("serial");
    test::TempDir parallel("parallel");
    PipelineOptions a = fixture_options(serial.path().string());
    PipelineOptions b = fixture_options(parallel.path().string());
    a.workers = 1;
    b.workers = 8;
    run_pipeline(a);
    run_pipeline(b);
    for (const char* name :
         {"matrix.csv", "strengths.csv", "consensus.json", "network.dot", "report.md"}) {
        CHECK(read_file(serial.file(name)) == read_file(parallel.file(name)));
    }
}

TEST_CASE("exported matrix reloads to identical bytes") {
    test::TempDir tmp("reload");
    run_pipeline(fixture_options(tmp.path().string()));
    const std::string data = read_file(tmp.file("matrix.csv"));
    CHECK(matrix_to_csv(load_matrix_csv(tmp.file("matrix.csv"))) == data);
}

TEST_CASE("every report number is backed by an exported artifact") {
    test::TempDir tmp("artifacts");
    const PipelineResult result = run_pipeline(fixture_options(tmp.path().string()));
    const std::string report = read_file(tmp.file("report.md"));
    const std::string strengths = read_file(tmp.file("strengths.csv"));
    // each consensus arc's strength appears in strengths.csv with the same value
    for (const auto& [s, t] : result.consensus.dag.arcs()) {
        const auto& src = result.consensus.dag.nodes()[static_cast<std::size_t>(s)];
        const auto& tgt = result.consensus.dag.nodes()[static_cast<std::size_t>(t)];
        char line[128];
        std::snprintf(line, sizeof(line), "%s,%s,%.4f", src.name().c_str(),
                      tgt.name().c_str(), result.consensus.strengths.get(src, tgt));
        CHECK_MESSAGE(strengths.find(line) != std::string::npos, line);
    }
    // excluded resources and their rates appear in the report
    for (const auto& [id, rate] : result.exclusion.excluded) {
        char cell[64];
        std::snprintf(cell, sizeof(cell), "| %s | %.4f |", id.name().c_str(), rate);
        CHECK_MESSAGE(report.find(cell) != std::string::npos, cell);
    }
}

TEST_CASE("cli exit codes: 0 ok, 1 usage, 2 input") {
    test::TempDir tmp("cli");
    const std::string quiet = " > /dev/null 2>&1";

    CHECK(run_cli("pipeline --log " + kFixtures + "/activity_log.csv --config " + kFixtures +
                  "/course_config.json --out-dir " + tmp.file("out") +
                  " --iterations 5 --seed 1" + quiet) == 0);

    // missing required --config: usage error
    CHECK(run_cli("pipeline --log " + kFixtures + "/activity_log.csv --out-dir " +
                  tmp.file("x") + quiet) == 1);
    CHECK(run_cli(quiet) == 1);  // no subcommand

    // unreadable config: input error
    CHECK(run_cli("pipeline --log " + kFixtures + "/activity_log.csv --config /nonexistent.json"
                  " --out-dir " + tmp.file("y") + quiet) == 2);

    // malformed config: input error
    write_file(tmp.file("bad.json"), "{\"resources\": [], \"wat\": 1}");
    CHECK(run_cli("pipeline --log " + kFixtures + "/activity_log.csv --config " +
                  tmp.file("bad.json") + " --out-dir " + tmp.file("z") + quiet) == 2);
}

TEST_CASE("cli: a log with zero mappable rows exits 2 and names the mapping rules") {
    test::TempDir tmp("nomap");
    write_file(tmp.file("log.csv"),
               "Time,User full name,Event context,Event name\n"
               "\"3/10/22, 10:00\",Ada,Forum: General,Post created\n");
    const std::string stderr_path = tmp.file("stderr.txt");
    const int code = run_cli("pipeline --log " + tmp.file("log.csv") + " --config " + kFixtures +
                             "/course_config.json --out-dir " + tmp.file("out") +
                             " > /dev/null 2> " + stderr_path);
    CHECK(code == 2);
    const std::string message = read_file(stderr_path);
    CHECK(message.find("mapping") != std::string::npos);
    CHECK(message.find("quiz_1") != std::string::npos);  // rules are listed
}

TEST_CASE("cli: simulate then full pipeline round trip") {
    test::TempDir tmp("sim");
    const std::string quiet = " > /dev/null 2>&1";
    CHECK(run_cli("simulate --out-dir " + tmp.file("sim") + " --students 30 --seed 6" + quiet) ==
          0);
    CHECK(run_cli("pipeline --log " + tmp.file("sim") + "/log.csv --config " + tmp.file("sim") +
                  "/config.json --out-dir " + tmp.file("out") + " --iterations 5 --seed 6" +
                  quiet) == 0);
    CHECK(std::ifstream(tmp.file("out") + "/report.md").good());
}
