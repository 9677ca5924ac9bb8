// Command-line front end for the cooperative path-finding solver. Talks to
// the core exclusively through the C API in cocbs/cocbs.h.
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bench.hpp"
#include "cocbs/cocbs.h"
#include "gen.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeout = 2;
constexpr int kExitNotWellFormed = 3;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path);
}

struct SolveArgs {
    std::string map_path;
    std::string scen_path;
    int tasks = 0;
    std::string instance_path;
    std::string variant = "pc-le";
    long timeout_ms = 120000;
    bool check_only = false;
    bool skip_well_formed = false;
};

int run_solve(const SolveArgs& args) {
    char err[512] = "";
    cocbs_instance* inst = nullptr;
    cocbs_status st;
    if (!args.instance_path.empty()) {
        if (!args.map_path.empty() || !args.scen_path.empty()) {
            std::cerr << "error: --instance excludes --map/--scen/--tasks\n";
            return kExitError;
        }
        st = cocbs_instance_load_json(args.instance_path.c_str(), &inst, err, sizeof err);
    } else {
        if (args.map_path.empty() || args.scen_path.empty() || args.tasks <= 0) {
            std::cerr << "error: need --instance, or --map with --scen and --tasks\n";
            return kExitError;
        }
        st = cocbs_instance_load_movingai(args.map_path.c_str(), args.scen_path.c_str(), args.tasks,
                                          &inst, err, sizeof err);
    }
    if (st != COCBS_OK) {
        std::cerr << "error (" << cocbs_status_name(st) << "): " << err << "\n";
        return kExitError;
    }

    if (args.check_only) {
        int well_formed = 0;
        char diag[512] = "";
        st = cocbs_check_well_formed(inst, &well_formed, diag, sizeof diag);
        cocbs_instance_free(inst);
        if (st != COCBS_OK) {
            std::cerr << "error (" << cocbs_status_name(st) << "): " << diag << "\n";
            return kExitError;
        }
        nlohmann::json j;
        j["well_formed"] = well_formed != 0;
        if (!well_formed) j["diagnostic"] = diag;
        std::cout << j.dump(2) << "\n";
        return well_formed ? kExitSolved : kExitNotWellFormed;
    }

    cocbs_solve_options opts;
    cocbs_solve_options_init(&opts);
    if (!cocbs_cli::parse_variant(args.variant, opts.use_pc, opts.use_le)) {
        cocbs_instance_free(inst);
        std::cerr << "error: unknown variant '" << args.variant << "'\n";
        return kExitError;
    }
    opts.timeout_ms = args.timeout_ms;
    opts.skip_well_formed_check = args.skip_well_formed ? 1 : 0;

    cocbs_result* result = nullptr;
    st = cocbs_solve(inst, &opts, &result, err, sizeof err);
    if (result) {
        char* text = cocbs_result_json(result);
        if (text) {
            std::cout << text << "\n";
            cocbs_string_free(text);
        }
        cocbs_result_free(result);
    }
    cocbs_instance_free(inst);
    switch (st) {
        case COCBS_OK:
            return kExitSolved;
        case COCBS_ERR_TIMEOUT:
            return kExitTimeout;
        case COCBS_ERR_NOT_WELL_FORMED:
            return kExitNotWellFormed;
        default:
            std::cerr << "error (" << cocbs_status_name(st) << "): " << err << "\n";
            return kExitError;
    }
}

struct BenchArgs {
    std::string map_path;
    std::vector<std::string> scen_args;
    std::string tasks_csv = "6,10,14";
    std::string variants_csv = "all";
    long timeout_ms = 120000;
    uint64_t seed = 0;
    std::string format = "csv";
    std::string out_path;
};

int run_bench(const BenchArgs& args) {
    cocbs_cli::BenchConfig config;
    config.map_path = args.map_path;
    config.timeout_ms = args.timeout_ms;
    config.seed = args.seed;

    for (const std::string& arg : args.scen_args) {
        if (std::filesystem::is_directory(arg)) {
            std::vector<std::string> found;
            for (const auto& entry : std::filesystem::directory_iterator(arg))
                if (entry.is_regular_file() && entry.path().extension() == ".scen")
                    found.push_back(entry.path().string());
            std::sort(found.begin(), found.end());
            config.scen_paths.insert(config.scen_paths.end(), found.begin(), found.end());
        } else {
            config.scen_paths.push_back(arg);
        }
    }
    if (config.scen_paths.empty()) {
        std::cerr << "error: no scen files given\n";
        return kExitError;
    }

    for (const std::string& part : split_list(args.tasks_csv)) {
        int k = 0;
        try {
            k = std::stoi(part);
        } catch (const std::exception&) {
            k = 0;
        }
        if (k <= 0) {
            std::cerr << "error: bad task count '" << part << "'\n";
            return kExitError;
        }
        config.task_counts.push_back(k);
    }
    if (config.task_counts.empty()) {
        std::cerr << "error: --tasks list is empty\n";
        return kExitError;
    }

    if (args.variants_csv == "all") {
        config.variants = {"basic", "pc", "pc-le"};
    } else {
        for (const std::string& v : split_list(args.variants_csv)) {
            int pc = 0, le = 0;
            if (!cocbs_cli::parse_variant(v, pc, le)) {
                std::cerr << "error: unknown variant '" << v << "'\n";
                return kExitError;
            }
            config.variants.push_back(v);
        }
        if (config.variants.empty()) {
            std::cerr << "error: --variants list is empty\n";
            return kExitError;
        }
    }

    if (args.format != "csv" && args.format != "json") {
        std::cerr << "error: unknown format '" << args.format << "'\n";
        return kExitError;
    }

    const cocbs_cli::BenchOutput out = cocbs_cli::run_benchmark(config);
    const std::string body =
        args.format == "csv" ? cocbs_cli::to_csv(config, out) : cocbs_cli::to_json(config, out);
    if (args.out_path.empty())
        std::cout << body;
    else
        write_file(args.out_path, body);
    if (args.format == "csv") std::cerr << cocbs_cli::aggregate_report(out);
    return kExitSolved;
}

struct GenMapArgs {
    std::string style = "random";
    int width = 32;
    int height = 32;
    double obstacle_rate = 0.2;
    uint64_t seed = 1;
    std::string out_path;
};

int run_gen_map(const GenMapArgs& args) {
    const std::string text =
        cocbs_cli::generate_map_text(args.style, args.width, args.height, args.obstacle_rate, args.seed);
    write_file(args.out_path, text);
    return kExitSolved;
}

struct GenScenArgs {
    std::string map_path;
    int count = 40;
    uint64_t seed = 1;
    std::string out_path;
};

int run_gen_scen(const GenScenArgs& args) {
    const std::string map_text = read_file(args.map_path);
    const std::string map_name = std::filesystem::path(args.map_path).filename().string();
    const std::string text = cocbs_cli::generate_scen_text(map_text, map_name, args.count, args.seed);
    write_file(args.out_path, text);
    return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal solver for cooperative pick-up/delivery path finding on grid maps"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "Solve one instance and print the result as JSON");
    solve->add_option("--map", solve_args.map_path, "MovingAI .map file");
    solve->add_option("--scen", solve_args.scen_path, "MovingAI .scen file (rows pair up per task)");
    solve->add_option("--tasks", solve_args.tasks, "number of tasks to take from the scen file");
    solve->add_option("--instance", solve_args.instance_path, "instance as a JSON file");
    solve->add_option("--variant", solve_args.variant, "basic, pc, or pc-le (default pc-le)");
    solve->add_option("--timeout-ms", solve_args.timeout_ms, "search budget in milliseconds");
    solve->add_flag("--check-well-formed-only", solve_args.check_only,
                    "only report whether the instance is well formed");
    solve->add_flag("--skip-well-formed-check", solve_args.skip_well_formed,
                    "search even if the structural check fails (termination then "
                    "relies on the timeout)");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "Run the benchmark harness over scen files");
    bench->add_option("--map", bench_args.map_path, "MovingAI .map file")->required();
    bench->add_option("--scen", bench_args.scen_args, ".scen file or directory of .scen files")
        ->required();
    bench->add_option("--tasks", bench_args.tasks_csv, "comma-separated task counts (default 6,10,14)");
    bench->add_option("--variants", bench_args.variants_csv,
                      "comma-separated variants or 'all' (default all)");
    bench->add_option("--timeout-ms", bench_args.timeout_ms, "per-run budget in milliseconds");
    bench->add_option("--seed", bench_args.seed, "recorded in the output for provenance");
    bench->add_option("--format", bench_args.format, "csv or json (default csv)");
    bench->add_option("--out", bench_args.out_path, "write the table to a file instead of stdout");

    GenMapArgs gen_map_args;
    CLI::App* gen_map = app.add_subcommand("gen-map", "Generate a deterministic MovingAI map");
    gen_map->add_option("--style", gen_map_args.style, "random or warehouse");
    gen_map->add_option("--width", gen_map_args.width, "map width");
    gen_map->add_option("--height", gen_map_args.height, "map height");
    gen_map->add_option("--obstacle-rate", gen_map_args.obstacle_rate,
                        "obstacle density for the random style");
    gen_map->add_option("--seed", gen_map_args.seed, "generator seed");
    gen_map->add_option("--out", gen_map_args.out_path, "output .map path")->required();

    GenScenArgs gen_scen_args;
    CLI::App* gen_scen = app.add_subcommand("gen-scen", "Generate a deterministic scen file for a map");
    gen_scen->add_option("--map", gen_scen_args.map_path, "MovingAI .map file")->required();
    gen_scen->add_option("--count", gen_scen_args.count, "number of scen rows (2 per task)");
    gen_scen->add_option("--seed", gen_scen_args.seed, "generator seed");
    gen_scen->add_option("--out", gen_scen_args.out_path, "output .scen path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (bench->parsed()) return run_bench(bench_args);
        if (gen_map->parsed()) return run_gen_map(gen_map_args);
        if (gen_scen->parsed()) return run_gen_scen(gen_scen_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
