#pragma once

#include <string>
#include <vector>

#include "grid_map.hpp"
#include "pathfinding.hpp"
#include "types.hpp"

namespace cocbs {

// Multi-valued decision diagram: layer t holds every cell some minimal-cost
// constrained path occupies at time t. An empty MDD means no such path
// exists at the requested cost.
struct Mdd {
    std::vector<std::vector<Cell>> layers;  // sorted by (row, col) per layer

    bool empty() const { return layers.empty(); }
    int depth() const { return static_cast<int>(layers.size()) - 1; }

    // True when layer t exists, holds exactly one cell, and that cell is c.
    bool singleton_at(int t, Cell c) const {
        return t >= 0 && t < static_cast<int>(layers.size()) &&
               layers[static_cast<size_t>(t)].size() == 1 && layers[static_cast<size_t>(t)][0] == c;
    }

    std::string dump() const;  // one line per layer: "t: (r,c) (r,c) ..."
};

// All cells on leader paths of cost exactly meeting.time: start -> (visit
// task_start) -> (meeting.loc @ meeting.time), subject to the constraints.
// Built as a reachability MDD pruned to nodes lying on some pickup-visiting
// path (a node qualifies if a task-start layer node is its ancestor or its
// descendant in the MDD's DAG).
Mdd build_leader_mdd(const GridMap& map, Cell start, Cell task_start, const Meeting& meeting,
                     const ConstraintSet& constraints);

// All cells on follower paths of cost exactly `cost`: start -> (meeting.loc
// @ meeting.time) -> first arrival at goal at time `cost`. The meeting-time
// layer is forced to the single meeting cell, and the goal cell is excluded
// from layers strictly between meeting.time and cost (the follower would
// already have finished there). When the meeting cell is the goal the
// hand-off is the delivery, so any cost other than meeting.time yields an
// empty MDD.
Mdd build_follower_mdd(const GridMap& map, Cell start, Cell goal, const Meeting& meeting,
                       const ConstraintSet& constraints, int cost);

// Layer oracle for a constraint-free agent's MDD: answers membership and
// singleton-layer queries from static distance fields without materializing
// the MDD. Node sets are identical to build_leader_mdd / build_follower_mdd
// under an empty constraint set, but one query costs O(cells) instead of the
// O(depth * cells) build, which dominates conflict classification.
class MddProbe {
public:
    // Leader MDD of depth meeting.time: start -> (visit task_start) ->
    // meeting.loc at meeting.time. Fields: from the leader's start, from the
    // task start, and from the meeting cell, all on the full map.
    static MddProbe leader(const DistanceField& from_start, const DistanceField& from_task_start,
                           const DistanceField& from_meeting, Cell task_start, const Meeting& meeting);

    // Follower MDD of depth `cost`: start -> meeting.loc at meeting.time ->
    // first goal arrival at `cost`. `from_meeting_avoiding_goal` must come
    // from compute_distance_field(map, meeting.loc, goal); the other fields
    // are on the full map.
    static MddProbe follower(const DistanceField& from_start, const DistanceField& from_meeting,
                             const DistanceField& from_goal,
                             const DistanceField& from_meeting_avoiding_goal, Cell goal,
                             const Meeting& meeting, int cost);

    bool contains(int t, Cell c) const;
    // Same contract as Mdd::singleton_at: layer t exists and equals {c}.
    bool singleton_at(int t, Cell c) const;

private:
    MddProbe() = default;
    bool member(int t, int idx) const;

    bool is_leader_ = false;
    bool feasible_ = false;  // some valid path exists; false means empty MDD
    int depth_ = 0;          // last layer index
    int mu_t_ = 0;
    int mu_idx_ = 0;
    int goal_idx_ = -1;  // follower only
    int d_o_s_ = 0;      // leader only: start -> task start
    int d_s_mu_ = 0;     // leader only: task start -> meeting
    int width_ = 0;
    int ncells_ = 0;
    const DistanceField* d_start_ = nullptr;
    const DistanceField* d_s_ = nullptr;         // leader only
    const DistanceField* d_mu_ = nullptr;
    const DistanceField* d_goal_ = nullptr;      // follower only
    const DistanceField* d_mu_avoid_ = nullptr;  // follower only
};

enum class ConflictClass : uint8_t { NonCardinal = 0, SemiCardinal = 1, Cardinal = 2 };

// Classification core over two "is this agent pinned to cell c at time t"
// predicates, shared by the MDD- and probe-backed paths.
template <typename ForcedA, typename ForcedB>
ConflictClass classify_conflict_with(const Conflict& conflict, ForcedA&& forced_a_at,
                                     ForcedB&& forced_b_at) {
    bool forced_a, forced_b;
    if (conflict.kind == ConstraintKind::Vertex) {
        forced_a = forced_a_at(conflict.time, conflict.v);
        forced_b = forced_b_at(conflict.time, conflict.v);
    } else {
        forced_a = forced_a_at(conflict.time, conflict.u) && forced_a_at(conflict.time + 1, conflict.v);
        forced_b = forced_b_at(conflict.time, conflict.v) && forced_b_at(conflict.time + 1, conflict.u);
    }
    if (forced_a && forced_b) return ConflictClass::Cardinal;
    if (forced_a || forced_b) return ConflictClass::SemiCardinal;
    return ConflictClass::NonCardinal;
}

// ICBS classification: a side is "forced" when its MDD pins it to the
// conflicting cell (vertex) or to both endpoints of the conflicting move
// (edge) via singleton layers. Both sides forced: cardinal; one: semi-
// cardinal; neither: non-cardinal. Missing layers count as not forced.
ConflictClass classify_conflict(const Conflict& conflict, const Mdd& mdd_a, const Mdd& mdd_b);

// Index of the split target among classified conflicts: the first cardinal
// one, else the first semi-cardinal, else the first overall.
size_t select_conflict_index(const std::vector<ConflictClass>& classes);

}  // namespace cocbs
