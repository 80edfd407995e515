#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lanet/bootstrap.hpp"
#include "lanet/config.hpp"
#include "lanet/ingest.hpp"
#include "lanet/matrix.hpp"
#include "lanet/report.hpp"

namespace lanet {

struct PipelineOptions {
    std::string log_path;
    std::string config_path;
    std::string out_dir;
    int window_days = 0;  // 0 keeps the config value
    int iterations = 100;
    double threshold = 0.5;
    double alpha = 1.0;
    std::uint64_t seed = 1;
    int workers = 1;
    std::vector<std::string> query_texts;
};

struct PipelineResult {
    IngestDiagnostics diagnostics;
    EngagementMatrix full_matrix;
    ExclusionResult exclusion;
    ConsensusNetwork consensus;
    CptSet cpts;
    std::vector<std::string> written;  // artifact paths, in write order
};

/// Full run: parse log -> build matrix -> exclusion -> bootstrap consensus ->
/// CPT fit -> artifacts. Writes matrix.csv (pre-exclusion), strengths.csv,
/// consensus.json, network.dot, and report.md into out_dir. Outputs are
/// byte-identical for identical inputs and seed, whatever the worker count.
PipelineResult run_pipeline(const PipelineOptions& options);

/// Write content to path, creating parent directories. Throws InputError on
/// I/O failure.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace lanet
