#include "bench.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cocbs/cocbs.h"

namespace cocbs_cli {

namespace {

std::string basename_of(const std::string& path) {
    return std::filesystem::path(path).filename().string();
}

std::string format_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

struct Group {
    int k = 0;
    std::string variant;
    int attempted = 0;
    int solved = 0;
    long long meeting_sets_solved_sum = 0;
    int first_set_solved = 0;
};

std::vector<Group> group_records(const BenchOutput& out) {
    std::vector<Group> groups;
    for (const RunRecord& r : out.records) {
        Group* g = nullptr;
        for (Group& cand : groups)
            if (cand.k == r.k && cand.variant == r.variant) g = &cand;
        if (!g) {
            groups.push_back(Group{r.k, r.variant, 0, 0, 0, 0});
            g = &groups.back();
        }
        g->attempted += 1;
        if (r.solved) {
            g->solved += 1;
            g->meeting_sets_solved_sum += r.meeting_sets;
            if (r.first_set_solved) g->first_set_solved += 1;
        }
    }
    return groups;
}

}  // namespace

bool parse_variant(const std::string& variant, int& use_pc, int& use_le) {
    if (variant == "basic") {
        use_pc = 0;
        use_le = 0;
    } else if (variant == "pc") {
        use_pc = 1;
        use_le = 0;
    } else if (variant == "pc-le") {
        use_pc = 1;
        use_le = 1;
    } else {
        return false;
    }
    return true;
}

BenchOutput run_benchmark(const BenchConfig& config) {
    BenchOutput out;
    char err[512];
    const std::string map_name = basename_of(config.map_path);

    for (const std::string& scen_path : config.scen_paths) {
        const std::string scen_name = basename_of(scen_path);
        for (int k : config.task_counts) {
            cocbs_instance* inst = nullptr;
            cocbs_status st = cocbs_instance_load_movingai(config.map_path.c_str(), scen_path.c_str(), k,
                                                           &inst, err, sizeof err);
            if (st != COCBS_OK) {
                out.rejected.push_back(scen_name + " k=" + std::to_string(k) + ": " + err);
                continue;
            }
            int well_formed = 0;
            st = cocbs_check_well_formed(inst, &well_formed, err, sizeof err);
            if (st != COCBS_OK || !well_formed) {
                out.rejected.push_back(scen_name + " k=" + std::to_string(k) + ": " +
                                       (st == COCBS_OK ? err : "well-formedness check failed"));
                cocbs_instance_free(inst);
                continue;
            }
            for (const std::string& variant : config.variants) {
                cocbs_solve_options opts;
                cocbs_solve_options_init(&opts);
                opts.timeout_ms = config.timeout_ms;
                if (!parse_variant(variant, opts.use_pc, opts.use_le)) continue;

                cocbs_result* result = nullptr;
                st = cocbs_solve(inst, &opts, &result, err, sizeof err);
                RunRecord rec;
                rec.map_name = map_name;
                rec.scen_name = scen_name;
                rec.k = k;
                rec.variant = variant;
                if (result) {
                    cocbs_run_stats stats;
                    cocbs_result_stats(result, &stats);
                    rec.solved = cocbs_result_solved(result) != 0;
                    rec.soc = cocbs_result_cost(result);
                    rec.time_ms = stats.time_ms;
                    rec.meeting_sets = stats.meeting_sets;
                    rec.first_set_solved = stats.first_set_solved != 0;
                    rec.roots_expanded = stats.roots_expanded;
                    rec.regulars_expanded = stats.regulars_expanded;
                    rec.planner_calls = stats.planner_calls;
                    cocbs_result_free(result);
                }
                out.records.push_back(std::move(rec));
                (void)st;
            }
            cocbs_instance_free(inst);
        }
    }
    return out;
}

std::string to_csv(const BenchConfig& config, const BenchOutput& out) {
    std::ostringstream csv;
    csv << "# map=" << basename_of(config.map_path) << " seed=" << config.seed
        << " timeout_ms=" << config.timeout_ms << "\n";
    csv << "map,scen,k,variant,solved,soc,time_ms,meeting_sets,first_set_solved,roots_expanded,"
           "regulars_expanded,planner_calls\n";
    for (const RunRecord& r : out.records) {
        csv << r.map_name << ',' << r.scen_name << ',' << r.k << ',' << r.variant << ','
            << (r.solved ? 1 : 0) << ',';
        if (r.solved) csv << r.soc;
        csv << ',' << format_ms(r.time_ms) << ',' << r.meeting_sets << ','
            << (r.first_set_solved ? 1 : 0) << ',' << r.roots_expanded << ',' << r.regulars_expanded
            << ',' << r.planner_calls << "\n";
    }
    return csv.str();
}

std::string aggregate_report(const BenchOutput& out) {
    std::ostringstream rep;
    for (const Group& g : group_records(out)) {
        double rate = g.attempted ? 100.0 * g.solved / g.attempted : 0.0;
        double mean_sets = g.solved ? static_cast<double>(g.meeting_sets_solved_sum) / g.solved : 0.0;
        double eta = g.attempted ? static_cast<double>(g.first_set_solved) / g.attempted : 0.0;
        char line[256];
        std::snprintf(line, sizeof line,
                      "k=%d variant=%s: solved %d/%d (%.1f%%), mean meeting sets (solved) %.2f, "
                      "first-set ratio %.2f\n",
                      g.k, g.variant.c_str(), g.solved, g.attempted, rate, mean_sets, eta);
        rep << line;
    }
    rep << "rejected: " << out.rejected.size() << "\n";
    for (const std::string& r : out.rejected) rep << "  " << r << "\n";
    return rep.str();
}

std::string to_json(const BenchConfig& config, const BenchOutput& out) {
    nlohmann::json j;
    j["config"] = {{"map", basename_of(config.map_path)},
                   {"seed", config.seed},
                   {"timeout_ms", config.timeout_ms}};
    nlohmann::json rows = nlohmann::json::array();
    for (const RunRecord& r : out.records) {
        rows.push_back({{"map", r.map_name},
                        {"scen", r.scen_name},
                        {"k", r.k},
                        {"variant", r.variant},
                        {"solved", r.solved ? 1 : 0},
                        {"soc", r.solved ? nlohmann::json(r.soc) : nlohmann::json(nullptr)},
                        {"time_ms", r.time_ms},
                        {"meeting_sets", r.meeting_sets},
                        {"first_set_solved", r.first_set_solved ? 1 : 0},
                        {"roots_expanded", r.roots_expanded},
                        {"regulars_expanded", r.regulars_expanded},
                        {"planner_calls", r.planner_calls}});
    }
    j["rows"] = std::move(rows);
    nlohmann::json groups = nlohmann::json::array();
    for (const Group& g : group_records(out)) {
        groups.push_back(
            {{"k", g.k},
             {"variant", g.variant},
             {"attempted", g.attempted},
             {"solved", g.solved},
             {"success_rate", g.attempted ? static_cast<double>(g.solved) / g.attempted : 0.0},
             {"mean_meeting_sets_solved",
              g.solved ? static_cast<double>(g.meeting_sets_solved_sum) / g.solved : 0.0},
             {"first_set_ratio",
              g.attempted ? static_cast<double>(g.first_set_solved) / g.attempted : 0.0}});
    }
    j["aggregates"] = {{"groups", std::move(groups)}, {"rejected", out.rejected}};
    return j.dump(2);
}

}  // namespace cocbs_cli
