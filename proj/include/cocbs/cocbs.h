/* C interface to the cooperative path-finding solver.
 *
 * All functions returning cocbs_status write a diagnostic into the caller's
 * buffer on failure (truncated to err_size, always NUL-terminated when
 * err_size > 0). Objects returned through out-parameters are owned by the
 * caller and released with the matching *_free function. A solver result
 * object is produced for solved, timed-out, and not-well-formed runs alike,
 * so statistics stay available; the status code mirrors the outcome.
 */
#ifndef COCBS_H
#define COCBS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cocbs_status {
    COCBS_OK = 0,
    COCBS_ERR_PARSE = 1,            /* malformed map/scen/instance input */
    COCBS_ERR_INVALID_INSTANCE = 2, /* inconsistent sizes, blocked/duplicate cells */
    COCBS_ERR_NOT_WELL_FORMED = 3,  /* structurally unsolvable instance */
    COCBS_ERR_TIMEOUT = 4,          /* search hit the time budget */
    COCBS_ERR_IO = 5,               /* file could not be read or written */
    COCBS_ERR_ARGUMENT = 6,         /* null pointer or out-of-range argument */
    COCBS_ERR_INTERNAL = 7          /* unexpected failure inside the library */
} cocbs_status;

const char* cocbs_status_name(cocbs_status status);

typedef struct cocbs_instance cocbs_instance;
typedef struct cocbs_result cocbs_result;

typedef struct cocbs_solve_options {
    int use_pc;         /* prioritize cardinal conflicts */
    int use_le;         /* lazy root expansion */
    int skip_well_formed_check; /* search despite a failing structural check */
    long timeout_ms;    /* search budget */
} cocbs_solve_options;

/* basic variant, 120 s timeout */
void cocbs_solve_options_init(cocbs_solve_options* options);

typedef struct cocbs_run_stats {
    long long meeting_sets;     /* distinct meeting assignments turned into roots */
    long long roots_expanded;
    long long regulars_expanded;
    long long planner_calls;
    int first_set_solved;       /* 1 if the initial meeting assignment sufficed */
    double time_ms;
} cocbs_run_stats;

/* Loads the native JSON instance format ({"map", "tasks", "leaders",
 * "followers"}); relative map paths resolve against the JSON file. */
cocbs_status cocbs_instance_load_json(const char* path, cocbs_instance** out,
                                      char* err, size_t err_size);

/* Builds a num_tasks-task instance from a MovingAI map/scen pair: scen row
 * 2j holds task j's start/goal, row 2j+1 the leader/follower start cells. */
cocbs_status cocbs_instance_load_movingai(const char* map_path, const char* scen_path,
                                          int num_tasks, cocbs_instance** out,
                                          char* err, size_t err_size);

void cocbs_instance_free(cocbs_instance* instance);

int cocbs_instance_num_tasks(const cocbs_instance* instance);

/* Structural solvability check. *well_formed is set to 1 or 0; when 0, the
 * diagnostic names the failing task and condition. */
cocbs_status cocbs_check_well_formed(const cocbs_instance* instance, int* well_formed,
                                     char* diag, size_t diag_size);

/* Runs the optimal search. Returns COCBS_OK, COCBS_ERR_TIMEOUT, or
 * COCBS_ERR_NOT_WELL_FORMED; in all three cases *out carries a result
 * object. options may be NULL for defaults. */
cocbs_status cocbs_solve(const cocbs_instance* instance, const cocbs_solve_options* options,
                         cocbs_result** out, char* err, size_t err_size);

/* 1 when the result holds an optimal solution. */
int cocbs_result_solved(const cocbs_result* result);

/* Optimal sum-of-costs, or -1 when unsolved. */
long long cocbs_result_cost(const cocbs_result* result);

void cocbs_result_stats(const cocbs_result* result, cocbs_run_stats* out);

/* Full result as pretty-printed JSON (status, cost, per-task meeting and
 * paths, stats). Caller frees with cocbs_string_free. Returns NULL on
 * allocation failure. */
char* cocbs_result_json(const cocbs_result* result);

void cocbs_result_free(cocbs_result* result);

void cocbs_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* COCBS_H */
