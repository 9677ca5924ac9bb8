#include "cocbs/cocbs.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <string>

#include "scenario.hpp"
#include "search.hpp"
#include "wellformed.hpp"

struct cocbs_instance {
    cocbs::Instance inst;
};

struct cocbs_result {
    cocbs::SolveResult res;
};

namespace {

void write_message(char* buf, size_t size, const std::string& msg) {
    if (!buf || size == 0) return;
    size_t n = std::min(msg.size(), size - 1);
    std::memcpy(buf, msg.data(), n);
    buf[n] = '\0';
}

// Runs fn, translating C++ failures into status codes + messages.
template <typename Fn>
cocbs_status guarded(char* err, size_t err_size, Fn&& fn) {
    try {
        return fn();
    } catch (const cocbs::ParseError& e) {
        write_message(err, err_size, e.what());
        return COCBS_ERR_PARSE;
    } catch (const cocbs::InvalidInstance& e) {
        write_message(err, err_size, e.what());
        return COCBS_ERR_INVALID_INSTANCE;
    } catch (const cocbs::IoError& e) {
        write_message(err, err_size, e.what());
        return COCBS_ERR_IO;
    } catch (const std::exception& e) {
        write_message(err, err_size, e.what());
        return COCBS_ERR_INTERNAL;
    } catch (...) {
        write_message(err, err_size, "unknown error");
        return COCBS_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

const char* cocbs_status_name(cocbs_status status) {
    switch (status) {
        case COCBS_OK: return "ok";
        case COCBS_ERR_PARSE: return "parse-error";
        case COCBS_ERR_INVALID_INSTANCE: return "invalid-instance";
        case COCBS_ERR_NOT_WELL_FORMED: return "not-well-formed";
        case COCBS_ERR_TIMEOUT: return "timeout";
        case COCBS_ERR_IO: return "io-error";
        case COCBS_ERR_ARGUMENT: return "bad-argument";
        case COCBS_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

void cocbs_solve_options_init(cocbs_solve_options* options) {
    if (!options) return;
    options->use_pc = 0;
    options->use_le = 0;
    options->skip_well_formed_check = 0;
    options->timeout_ms = 120000;
}

cocbs_status cocbs_instance_load_json(const char* path, cocbs_instance** out,
                                      char* err, size_t err_size) {
    if (!path || !out) {
        write_message(err, err_size, "null argument");
        return COCBS_ERR_ARGUMENT;
    }
    *out = nullptr;
    return guarded(err, err_size, [&]() {
        *out = new cocbs_instance{cocbs::load_instance_json(path)};
        return COCBS_OK;
    });
}

cocbs_status cocbs_instance_load_movingai(const char* map_path, const char* scen_path,
                                          int num_tasks, cocbs_instance** out,
                                          char* err, size_t err_size) {
    if (!map_path || !scen_path || !out) {
        write_message(err, err_size, "null argument");
        return COCBS_ERR_ARGUMENT;
    }
    if (num_tasks < 0) {
        write_message(err, err_size, "task count must be non-negative");
        return COCBS_ERR_ARGUMENT;
    }
    *out = nullptr;
    return guarded(err, err_size, [&]() {
        cocbs::GridMap map = cocbs::GridMap::load(map_path);
        std::vector<cocbs::ScenEntry> entries = cocbs::load_scen(scen_path);
        *out = new cocbs_instance{cocbs::build_instance(map, entries, num_tasks)};
        return COCBS_OK;
    });
}

void cocbs_instance_free(cocbs_instance* instance) { delete instance; }

int cocbs_instance_num_tasks(const cocbs_instance* instance) {
    return instance ? instance->inst.num_tasks() : 0;
}

cocbs_status cocbs_check_well_formed(const cocbs_instance* instance, int* well_formed,
                                     char* diag, size_t diag_size) {
    if (!instance || !well_formed) {
        write_message(diag, diag_size, "null argument");
        return COCBS_ERR_ARGUMENT;
    }
    return guarded(diag, diag_size, [&]() {
        cocbs::WellFormedReport report = cocbs::is_well_formed(instance->inst);
        *well_formed = report.well_formed ? 1 : 0;
        if (!report.well_formed) write_message(diag, diag_size, report.message);
        return COCBS_OK;
    });
}

cocbs_status cocbs_solve(const cocbs_instance* instance, const cocbs_solve_options* options,
                         cocbs_result** out, char* err, size_t err_size) {
    if (!instance || !out) {
        write_message(err, err_size, "null argument");
        return COCBS_ERR_ARGUMENT;
    }
    *out = nullptr;
    return guarded(err, err_size, [&]() {
        cocbs::SolveOptions opts;
        if (options) {
            opts.use_pc = options->use_pc != 0;
            opts.use_le = options->use_le != 0;
            opts.skip_well_formed_check = options->skip_well_formed_check != 0;
            opts.timeout_ms = options->timeout_ms;
        }
        cocbs::SolveResult res = cocbs::solve(instance->inst, opts);
        *out = new cocbs_result{std::move(res)};
        switch ((*out)->res.status) {
            case cocbs::SolveStatus::Solved: return COCBS_OK;
            case cocbs::SolveStatus::Timeout:
                write_message(err, err_size, "search timed out");
                return COCBS_ERR_TIMEOUT;
            case cocbs::SolveStatus::NotWellFormed:
                write_message(err, err_size, (*out)->res.well_formed.message);
                return COCBS_ERR_NOT_WELL_FORMED;
            case cocbs::SolveStatus::Unsolvable:
                write_message(err, err_size, "instance has no solution");
                return COCBS_ERR_INTERNAL;
        }
        return COCBS_ERR_INTERNAL;
    });
}

int cocbs_result_solved(const cocbs_result* result) {
    return result && result->res.status == cocbs::SolveStatus::Solved ? 1 : 0;
}

long long cocbs_result_cost(const cocbs_result* result) {
    if (!result || result->res.status != cocbs::SolveStatus::Solved) return -1;
    return result->res.cost;
}

void cocbs_result_stats(const cocbs_result* result, cocbs_run_stats* out) {
    if (!result || !out) return;
    const cocbs::SearchStats& s = result->res.stats;
    out->meeting_sets = s.meeting_sets_generated;
    out->roots_expanded = s.roots_expanded;
    out->regulars_expanded = s.regulars_expanded;
    out->planner_calls = s.planner_calls;
    out->first_set_solved = s.first_set_solved ? 1 : 0;
    out->time_ms = s.time_ms;
}

char* cocbs_result_json(const cocbs_result* result) {
    if (!result) return nullptr;
    try {
        std::string text = cocbs::solution_to_json(result->res);
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (!buf) return nullptr;
        std::memcpy(buf, text.data(), text.size() + 1);
        return buf;
    } catch (...) {
        return nullptr;
    }
}

void cocbs_result_free(cocbs_result* result) { delete result; }

void cocbs_string_free(char* text) { std::free(text); }

}  // extern "C"
