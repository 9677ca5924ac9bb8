#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "grid_map.hpp"
#include "types.hpp"

namespace cocbs {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

// Saturating add so unreachable distances propagate instead of overflowing.
inline int dist_plus(int a, int b) {
    if (a == kUnreachable || b == kUnreachable) return kUnreachable;
    return a + b;
}

// Shortest-step distances from one source cell to every cell, ignoring other
// agents. The grid is undirected, so at(c) is also the distance from c back
// to the source.
struct DistanceField {
    Cell source;
    int width = 0;
    std::vector<int> dist;  // kUnreachable where no path exists

    int at(Cell c) const { return dist[static_cast<size_t>(c.row * width + c.col)]; }
    int at_index(int idx) const { return dist[static_cast<size_t>(idx)]; }
};

DistanceField compute_distance_field(const GridMap& map, Cell source);

// Variant with one cell treated as blocked (unless it is the source itself).
// Used where paths may touch a cell only as their final step, e.g. the
// follower's goal after the hand-off.
DistanceField compute_distance_field(const GridMap& map, Cell source, Cell avoid);

// Constraints applying to a single agent, bucketed by time for cheap lookup
// in the planners' inner loop (sets are tiny, so a per-time scan beats
// hashing). Vertex entries are cell indices; edge entries pack (from, to)
// with t the departure time.
class ConstraintSet {
public:
    ConstraintSet() = default;
    explicit ConstraintSet(const GridMap& map) : cells_(map.size()) {}

    // Keeps only constraints addressed to `agent`.
    ConstraintSet(const GridMap& map, std::span<const Constraint> all, int agent);

    void add(const GridMap& map, const Constraint& c);

    bool blocks_vertex(int cell_idx, int t) const {
        if (t < 0 || t >= static_cast<int>(vertex_by_t_.size())) return false;
        for (int32_t v : vertex_by_t_[static_cast<size_t>(t)])
            if (v == cell_idx) return true;
        return false;
    }
    bool blocks_edge(int from_idx, int to_idx, int t) const {
        if (t < 0 || t >= static_cast<int>(edge_by_t_.size())) return false;
        const int64_t key = static_cast<int64_t>(from_idx) * cells_ + to_idx;
        for (int64_t e : edge_by_t_[static_cast<size_t>(t)])
            if (e == key) return true;
        return false;
    }

    int latest_time() const { return latest_; }
    size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

private:
    int64_t cells_ = 0;
    int latest_ = -1;
    size_t count_ = 0;
    std::vector<std::vector<int32_t>> vertex_by_t_;  // [t] -> blocked cell indices
    std::vector<std::vector<int64_t>> edge_by_t_;    // [t] -> packed (from, to) moves
};

// Inputs shared by the planners: unconstrained distance fields used both as
// admissible feasibility prunes and for meeting-cost arithmetic. All fields
// refer to the same map the search runs on.
struct PlannerFields {
    const DistanceField* from_task_start = nullptr;  // leader only
    const DistanceField* from_meeting = nullptr;     // both
    const DistanceField* from_goal = nullptr;        // follower only
};

// Plans the leader's timed path: start at `start` at t=0, occupy the task
// start cell at some t <= meeting.time (payload pickup), and end exactly at
// (meeting.loc, meeting.time). Returns nullopt when no such path satisfies
// the constraints. The returned path has exactly meeting.time + 1 cells.
std::optional<Path> plan_leader_path(const GridMap& map, Cell start, Cell task_start,
                                     const Meeting& meeting, const ConstraintSet& constraints,
                                     const PlannerFields& fields);

// Plans the follower's timed path: start at `start` at t=0, occupy
// (meeting.loc, meeting.time), then reach `goal`; the path ends at the first
// arrival at goal at or after the meeting, and that finish time is minimal
// subject to the constraints. Returns nullopt when infeasible within the
// safe horizon max(meeting.time, latest constraint time) + free cells + 1.
std::optional<Path> plan_follower_path(const GridMap& map, Cell start, Cell goal,
                                       const Meeting& meeting, const ConstraintSet& constraints,
                                       const PlannerFields& fields);

}  // namespace cocbs
