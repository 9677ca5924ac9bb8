#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cocbs_cli {

struct BenchConfig {
    std::string map_path;
    std::vector<std::string> scen_paths;  // one query per file, run in order
    std::vector<int> task_counts;
    std::vector<std::string> variants;  // subset of {"basic", "pc", "pc-le"}
    long timeout_ms = 120000;
    uint64_t seed = 0;  // echoed into the CSV header for provenance
};

struct RunRecord {
    std::string map_name;
    std::string scen_name;
    int k = 0;
    std::string variant;
    bool solved = false;
    long long soc = -1;
    double time_ms = 0.0;
    long long meeting_sets = 0;
    bool first_set_solved = false;
    long long roots_expanded = 0;
    long long regulars_expanded = 0;
    long long planner_calls = 0;
};

struct BenchOutput {
    std::vector<RunRecord> records;     // attempted solves only
    std::vector<std::string> rejected;  // skipped (scen, k) pairs with the reason
};

// Maps a variant name ("basic", "pc", "pc-le") onto solver flags. Returns
// false for unknown names.
bool parse_variant(const std::string& variant, int& use_pc, int& use_le);

// Runs each (scen file, task count) instance under every variant. Instances
// that fail to load or are not well formed are listed in `rejected` and get
// no CSV rows; they are excluded from success-rate denominators.
BenchOutput run_benchmark(const BenchConfig& config);

// Deterministic CSV (text identical across runs except the time_ms column):
// a header comment naming map/seed/timeout, the fixed column header, one row
// per record.
std::string to_csv(const BenchConfig& config, const BenchOutput& out);

// Human-readable summary: per (k, variant) success rate, mean generated
// meeting sets over solved runs, and the ratio of runs solved with the first
// meeting set; then the rejected list.
std::string aggregate_report(const BenchOutput& out);

// One JSON document: {"config": ..., "rows": [...], "aggregates": ...}.
std::string to_json(const BenchConfig& config, const BenchOutput& out);

}  // namespace cocbs_cli
