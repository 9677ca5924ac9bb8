#pragma once

#include <tuple>
#include <vector>

#include "pathfinding.hpp"
#include "scenario.hpp"
#include "types.hpp"

namespace cocbs {

struct UnsolvableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-task meeting machinery. Construction runs three BFS sweeps (from the
// task start, the follower start, and the goal) and seeds a min-heap with
// every cell's earliest feasible meeting. The heap then acts as an endless
// non-decreasing stream: each pop of (v, t, c) reinserts (v, t+1, c+2).
//
// Meeting time (earliest the hand-off can happen at v):
//   t_e(v) = max( d(leader, task_start) + d(task_start, v), d(follower, v) )
// Meeting cost (pair's path-length sum when meeting at (v, t), t >= t_e(v)):
//   C(v, t) = 2t + d(v, goal)
class MeetingTable {
public:
    MeetingTable(const Instance& inst, int task);

    int task_index() const { return task_; }

    // Direct evaluation; kUnreachable when v can never host the meeting
    // (or, for cost, when t precedes t_e(v) or the goal is cut off).
    int earliest_time(Cell v) const;
    int cost_at(Cell v, int t) const;
    int initial_cost(Cell v) const;  // cost_at(v, earliest_time(v))

    // True when no cell has a finite meeting cost; the task is unsolvable
    // even with the map to itself.
    bool stream_empty() const { return heap_.empty(); }

    // Pops the cheapest candidate, reinserts its (t+1, cost+2) successor,
    // and appends the popped meeting to the materialized prefix. Ties break
    // by (row, col, time). Throws UnsolvableError on an empty stream.
    Meeting next_meeting();

    // Sorted-stream prefix access; materializes through next_meeting() on
    // demand. Position 0 is the task's cheapest meeting.
    const Meeting& meeting_at(size_t pos);
    int cost_at_pos(size_t pos);
    size_t materialized_count() const { return materialized_.size(); }

    // Unconstrained distance fields, shared with the planners.
    const DistanceField& from_task_start() const { return from_task_start_; }
    const DistanceField& from_follower_start() const { return from_follower_start_; }
    const DistanceField& from_goal() const { return from_goal_; }
    int leader_to_task_start() const { return leader_to_task_start_; }

private:
    struct Candidate {
        int cost;
        Cell loc;
        int time;
        // min-heap order: cheapest cost first, then row, col, time
        bool operator>(const Candidate& o) const {
            return std::tuple(cost, loc.row, loc.col, time) > std::tuple(o.cost, o.loc.row, o.loc.col, o.time);
        }
    };

    int task_;
    DistanceField from_task_start_;
    DistanceField from_follower_start_;
    DistanceField from_goal_;
    int leader_to_task_start_;
    std::vector<Candidate> heap_;  // std::push_heap/pop_heap with operator>
    std::vector<Meeting> materialized_;
    std::vector<int> materialized_cost_;
};

std::vector<MeetingTable> build_meeting_tables(const Instance& inst);

// A full assignment of one meeting per task plus its summed cost.
struct MeetingSet {
    std::vector<Meeting> meetings;
    int cost = 0;
};

// Each task's cheapest meeting (stream position 0). Throws UnsolvableError
// if any table is empty.
MeetingSet initial_meeting_set(std::vector<MeetingTable>& tables);

}  // namespace cocbs
