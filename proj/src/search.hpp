#pragma once

#include <memory>
#include <string>
#include <vector>

#include "meetings.hpp"
#include "scenario.hpp"
#include "types.hpp"
#include "wellformed.hpp"

namespace cocbs {

// The pair of timed paths serving one task.
struct TaskPlan {
    Path leader;
    Path follower;
};

// One plan per task. Plans are shared between search nodes and treated as
// immutable once created; a node replacing one pair's plan copies the slot.
struct Solution {
    std::vector<std::shared_ptr<const TaskPlan>> plans;

    int num_tasks() const { return static_cast<int>(plans.size()); }
    const Path& agent_path(int agent) const {
        const TaskPlan& p = *plans[static_cast<size_t>(Instance::task_of(agent))];
        return Instance::is_leader(agent) ? p.leader : p.follower;
    }
};

// Sum-of-costs: every agent pays one unit per time step (moves and waits
// alike) until its own finish time. Empty solutions cost 0.
int compute_soc(const Solution& solution);

// Every collision in the solution, sorted by (time, agent pair): vertex
// collisions while both agents are active, and edge swaps. The one
// sanctioned co-location is a pair meeting at exactly its (cell, time)
// hand-off. Edge conflicts carry the departure time; u/v are the first
// agent's move origin/destination.
std::vector<Conflict> detect_conflicts(const Solution& solution, const MeetingSet& meetings);

struct SolveOptions {
    bool use_pc = false;  // split cardinal conflicts first (MDD classification)
    bool use_le = false;  // defer root path planning until the root is popped
    // Run the search even when the Definition-1 gate fails. The optimality
    // guarantee still holds for any solution found, but termination is then
    // only assured by the timeout. The result still carries the report.
    bool skip_well_formed_check = false;
    int64_t timeout_ms = 120000;
};

enum class SolveStatus { Solved, Timeout, NotWellFormed, Unsolvable };

struct SearchStats {
    int64_t meeting_sets_generated = 0;  // distinct meeting assignments turned into roots
    int64_t roots_expanded = 0;
    int64_t regulars_expanded = 0;
    int64_t planner_calls = 0;
    bool first_set_solved = false;  // solution used the initial meeting set
    double time_ms = 0.0;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Unsolvable;
    int cost = -1;         // optimal sum-of-costs when Solved
    MeetingSet meetings;   // populated when Solved
    Solution solution;     // populated when Solved
    SearchStats stats;
    WellFormedReport well_formed;
};

// Optimal cooperative search: a forest of constraint trees, one root per
// meeting assignment, grown best-first in lockstep with the conflict-split
// level. Returns the minimal sum-of-costs solution, or Timeout/NotWellFormed.
SolveResult solve(const Instance& inst, const SolveOptions& options);

// Pretty-printed JSON: {"status", "cost", "tasks": [{"meeting": {"cell":
// [r,c], "t": t}, "leader_path": [[r,c],...], "follower_path": [...]}, ...],
// "stats": {...}}. cost/tasks appear only for solved results.
std::string solution_to_json(const SolveResult& result);

}  // namespace cocbs
