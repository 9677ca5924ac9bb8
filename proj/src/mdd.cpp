#include "mdd.hpp"

#include <sstream>

namespace cocbs {

namespace {

using LayerBits = std::vector<std::vector<uint8_t>>;  // [t][cell_idx]

// Forward space-time reachability under the constraint set, layers 0..depth.
// Returns false if the start itself is blocked at t=0.
bool forward_reach(const GridMap& map, Cell start, const ConstraintSet& constraints, int depth,
                   LayerBits& fwd) {
    const int n = map.size();
    fwd.assign(static_cast<size_t>(depth) + 1, std::vector<uint8_t>(static_cast<size_t>(n), 0));
    int start_idx = map.index(start);
    if (constraints.blocks_vertex(start_idx, 0)) return false;
    fwd[0][static_cast<size_t>(start_idx)] = 1;
    for (int t = 0; t < depth; ++t) {
        for (int idx = 0; idx < n; ++idx) {
            if (!fwd[static_cast<size_t>(t)][static_cast<size_t>(idx)]) continue;
            Cell c = map.cell(idx);
            auto relax = [&](Cell to) {
                if (!map.traversable(to)) return;
                int to_idx = map.index(to);
                if (constraints.blocks_vertex(to_idx, t + 1)) return;
                if (constraints.blocks_edge(idx, to_idx, t)) return;
                fwd[static_cast<size_t>(t) + 1][static_cast<size_t>(to_idx)] = 1;
            };
            for (const auto& m : GridMap::kMoves) relax(Cell{c.row + m[0], c.col + m[1]});
            relax(c);
        }
    }
    return true;
}

// Backward restriction of fwd to cells that still reach `sink` at the final
// layer; the result is the exact MDD node set.
void backward_restrict(const GridMap& map, const ConstraintSet& constraints, const LayerBits& fwd,
                       int sink_idx, LayerBits& node) {
    const int depth = static_cast<int>(fwd.size()) - 1;
    const int n = map.size();
    node.assign(fwd.size(), std::vector<uint8_t>(static_cast<size_t>(n), 0));
    if (!fwd[static_cast<size_t>(depth)][static_cast<size_t>(sink_idx)]) return;
    node[static_cast<size_t>(depth)][static_cast<size_t>(sink_idx)] = 1;
    for (int t = depth - 1; t >= 0; --t) {
        for (int idx = 0; idx < n; ++idx) {
            if (!fwd[static_cast<size_t>(t)][static_cast<size_t>(idx)]) continue;
            Cell c = map.cell(idx);
            auto reaches = [&](Cell to) {
                if (!map.traversable(to)) return false;
                int to_idx = map.index(to);
                if (!node[static_cast<size_t>(t) + 1][static_cast<size_t>(to_idx)]) return false;
                return !constraints.blocks_edge(idx, to_idx, t);
            };
            bool ok = reaches(c);
            for (const auto& m : GridMap::kMoves) {
                if (ok) break;
                ok = reaches(Cell{c.row + m[0], c.col + m[1]});
            }
            if (ok) node[static_cast<size_t>(t)][static_cast<size_t>(idx)] = 1;
        }
    }
}

Mdd collect_layers(const GridMap& map, const LayerBits& keep) {
    Mdd mdd;
    mdd.layers.resize(keep.size());
    for (size_t t = 0; t < keep.size(); ++t) {
        for (int idx = 0; idx < map.size(); ++idx)
            if (keep[t][static_cast<size_t>(idx)]) mdd.layers[t].push_back(map.cell(idx));
        if (mdd.layers[t].empty()) return Mdd{};  // disconnected: no valid path at this cost
    }
    return mdd;
}

}  // namespace

Mdd build_leader_mdd(const GridMap& map, Cell start, Cell task_start, const Meeting& meeting,
                     const ConstraintSet& constraints) {
    if (!map.traversable(start) || !map.traversable(task_start) || !map.traversable(meeting.loc))
        return Mdd{};
    const int depth = meeting.time;
    const int n = map.size();

    LayerBits fwd, node;
    if (!forward_reach(map, start, constraints, depth, fwd)) return Mdd{};
    backward_restrict(map, constraints, fwd, map.index(meeting.loc), node);

    // Keep only nodes on paths that visit the task start: nodes with a
    // task-start node among their ancestors (down-mark) or descendants
    // (up-mark) in the layered DAG.
    const int s_idx = map.index(task_start);
    bool s_present = false;
    LayerBits down(node.size(), std::vector<uint8_t>(static_cast<size_t>(n), 0));
    LayerBits up(node.size(), std::vector<uint8_t>(static_cast<size_t>(n), 0));
    for (size_t t = 0; t < node.size(); ++t) {
        if (node[t][static_cast<size_t>(s_idx)]) {
            down[t][static_cast<size_t>(s_idx)] = up[t][static_cast<size_t>(s_idx)] = 1;
            s_present = true;
        }
    }
    if (!s_present) return Mdd{};

    for (int t = 0; t < depth; ++t) {
        for (int idx = 0; idx < n; ++idx) {
            if (!down[static_cast<size_t>(t)][static_cast<size_t>(idx)]) continue;
            Cell c = map.cell(idx);
            auto mark = [&](Cell to) {
                if (!map.traversable(to)) return;
                int to_idx = map.index(to);
                if (!node[static_cast<size_t>(t) + 1][static_cast<size_t>(to_idx)]) return;
                if (constraints.blocks_edge(idx, to_idx, t)) return;
                down[static_cast<size_t>(t) + 1][static_cast<size_t>(to_idx)] = 1;
            };
            for (const auto& m : GridMap::kMoves) mark(Cell{c.row + m[0], c.col + m[1]});
            mark(c);
        }
    }
    for (int t = depth - 1; t >= 0; --t) {
        for (int idx = 0; idx < n; ++idx) {
            if (!node[static_cast<size_t>(t)][static_cast<size_t>(idx)] ||
                up[static_cast<size_t>(t)][static_cast<size_t>(idx)])
                continue;
            Cell c = map.cell(idx);
            auto reaches = [&](Cell to) {
                if (!map.traversable(to)) return false;
                int to_idx = map.index(to);
                if (!up[static_cast<size_t>(t) + 1][static_cast<size_t>(to_idx)]) return false;
                return !constraints.blocks_edge(idx, to_idx, t);
            };
            bool ok = reaches(c);
            for (const auto& m : GridMap::kMoves) {
                if (ok) break;
                ok = reaches(Cell{c.row + m[0], c.col + m[1]});
            }
            if (ok) up[static_cast<size_t>(t)][static_cast<size_t>(idx)] = 1;
        }
    }

    LayerBits keep(node.size(), std::vector<uint8_t>(static_cast<size_t>(n), 0));
    for (size_t t = 0; t < node.size(); ++t)
        for (int idx = 0; idx < n; ++idx)
            keep[t][static_cast<size_t>(idx)] =
                node[t][static_cast<size_t>(idx)] &&
                (down[t][static_cast<size_t>(idx)] || up[t][static_cast<size_t>(idx)]);
    return collect_layers(map, keep);
}

Mdd build_follower_mdd(const GridMap& map, Cell start, Cell goal, const Meeting& meeting,
                       const ConstraintSet& constraints, int cost) {
    if (!map.traversable(start) || !map.traversable(goal) || !map.traversable(meeting.loc))
        return Mdd{};
    if (cost < meeting.time) return Mdd{};
    const int n = map.size();
    const int goal_idx = map.index(goal);
    const int meeting_idx = map.index(meeting.loc);
    // A hand-off at the goal cell is itself the delivery, so the only
    // admissible finish time is the meeting time.
    if (meeting_idx == goal_idx && cost != meeting.time) return Mdd{};

    LayerBits fwd, node;
    if (!forward_reach(map, start, constraints, cost, fwd)) return Mdd{};

    // Hand-off semantics: the meeting-time layer collapses to the meeting
    // cell, and the goal cannot be occupied between meeting and finish (the
    // follower would already have delivered there).
    if (!fwd[static_cast<size_t>(meeting.time)][static_cast<size_t>(meeting_idx)]) return Mdd{};
    for (int idx = 0; idx < n; ++idx)
        if (idx != meeting_idx) fwd[static_cast<size_t>(meeting.time)][static_cast<size_t>(idx)] = 0;
    for (int t = meeting.time + 1; t < cost; ++t) fwd[static_cast<size_t>(t)][static_cast<size_t>(goal_idx)] = 0;
    // Re-run reachability below the meeting layer so cells only reachable
    // through removed nodes disappear.
    for (int t = meeting.time; t < cost; ++t) {
        std::vector<uint8_t> filtered(static_cast<size_t>(n), 0);
        for (int idx = 0; idx < n; ++idx) {
            if (!fwd[static_cast<size_t>(t)][static_cast<size_t>(idx)]) continue;
            Cell c = map.cell(idx);
            auto relax = [&](Cell to) {
                if (!map.traversable(to)) return;
                int to_idx = map.index(to);
                if (!fwd[static_cast<size_t>(t) + 1][static_cast<size_t>(to_idx)]) return;
                if (constraints.blocks_edge(idx, to_idx, t)) return;
                filtered[static_cast<size_t>(to_idx)] = 1;
            };
            for (const auto& m : GridMap::kMoves) relax(Cell{c.row + m[0], c.col + m[1]});
            relax(c);
        }
        fwd[static_cast<size_t>(t) + 1] = std::move(filtered);
    }

    backward_restrict(map, constraints, fwd, goal_idx, node);
    if (!node[0][static_cast<size_t>(map.index(start))]) return Mdd{};
    return collect_layers(map, node);
}

MddProbe MddProbe::leader(const DistanceField& from_start, const DistanceField& from_task_start,
                          const DistanceField& from_meeting, Cell task_start, const Meeting& meeting) {
    MddProbe p;
    p.is_leader_ = true;
    p.depth_ = meeting.time;
    p.mu_t_ = meeting.time;
    p.width_ = from_start.width;
    p.ncells_ = static_cast<int>(from_start.dist.size());
    p.mu_idx_ = meeting.loc.row * p.width_ + meeting.loc.col;
    p.d_o_s_ = from_start.at(task_start);
    p.d_s_mu_ = from_task_start.at(meeting.loc);
    p.d_start_ = &from_start;
    p.d_s_ = &from_task_start;
    p.d_mu_ = &from_meeting;
    // The membership conditions are vacuous when the start -> task start ->
    // meeting route misses the deadline, so no separate feasibility gate is
    // needed; any true answer implies a full valid path exists.
    p.feasible_ = dist_plus(p.d_o_s_, p.d_s_mu_) <= meeting.time;
    return p;
}

MddProbe MddProbe::follower(const DistanceField& from_start, const DistanceField& from_meeting,
                            const DistanceField& from_goal,
                            const DistanceField& from_meeting_avoiding_goal, Cell goal,
                            const Meeting& meeting, int cost) {
    MddProbe p;
    p.is_leader_ = false;
    p.depth_ = cost;
    p.mu_t_ = meeting.time;
    p.width_ = from_start.width;
    p.ncells_ = static_cast<int>(from_start.dist.size());
    p.mu_idx_ = meeting.loc.row * p.width_ + meeting.loc.col;
    p.goal_idx_ = goal.row * p.width_ + goal.col;
    p.d_start_ = &from_start;
    p.d_mu_ = &from_meeting;
    p.d_goal_ = &from_goal;
    p.d_mu_avoid_ = &from_meeting_avoiding_goal;
    if (cost < meeting.time || from_start.at(meeting.loc) > meeting.time) {
        p.feasible_ = false;
    } else if (cost == meeting.time) {
        p.feasible_ = (p.goal_idx_ == p.mu_idx_);
    } else {
        // Delivery after the hand-off: the goal must be reachable in time
        // from the meeting cell, which cannot itself be the goal (the path
        // would already have finished there).
        p.feasible_ = (p.goal_idx_ != p.mu_idx_) && from_goal.at(meeting.loc) <= cost - meeting.time;
    }
    return p;
}

bool MddProbe::member(int t, int idx) const {
    if (is_leader_) {
        const int rem = depth_ - t;
        // Task start still ahead: reach idx by t, then start -> meeting fits.
        if (d_start_->at_index(idx) <= t && dist_plus(d_s_->at_index(idx), d_s_mu_) <= rem)
            return true;
        // Task start already visited: route start -> task start -> idx by t.
        return dist_plus(d_o_s_, d_s_->at_index(idx)) <= t && d_mu_->at_index(idx) <= rem;
    }
    if (t < mu_t_) return d_start_->at_index(idx) <= t && d_mu_->at_index(idx) <= mu_t_ - t;
    if (t == mu_t_) return idx == mu_idx_;
    if (t == depth_) return idx == goal_idx_;
    return idx != goal_idx_ && d_mu_avoid_->at_index(idx) <= t - mu_t_ &&
           d_goal_->at_index(idx) <= depth_ - t;
}

bool MddProbe::contains(int t, Cell c) const {
    if (!feasible_ || t < 0 || t > depth_) return false;
    if (c.row < 0 || c.col < 0 || c.col >= width_) return false;
    const int idx = c.row * width_ + c.col;
    if (idx >= ncells_) return false;
    return member(t, idx);
}

bool MddProbe::singleton_at(int t, Cell c) const {
    if (!contains(t, c)) return false;
    const int c_idx = c.row * width_ + c.col;
    // Collapsed layers are singletons by construction.
    if (!is_leader_ && (t == mu_t_ || t == depth_)) return true;
    if (is_leader_ && t == depth_) return true;  // final layer is {meeting.loc}
    for (int idx = 0; idx < ncells_; ++idx)
        if (idx != c_idx && member(t, idx)) return false;
    return true;
}

ConflictClass classify_conflict(const Conflict& conflict, const Mdd& mdd_a, const Mdd& mdd_b) {
    return classify_conflict_with(
        conflict, [&](int t, Cell c) { return mdd_a.singleton_at(t, c); },
        [&](int t, Cell c) { return mdd_b.singleton_at(t, c); });
}

size_t select_conflict_index(const std::vector<ConflictClass>& classes) {
    for (ConflictClass want : {ConflictClass::Cardinal, ConflictClass::SemiCardinal}) {
        for (size_t i = 0; i < classes.size(); ++i)
            if (classes[i] == want) return i;
    }
    return 0;
}

std::string Mdd::dump() const {
    std::ostringstream out;
    for (size_t t = 0; t < layers.size(); ++t) {
        out << t << ":";
        for (const Cell& c : layers[t]) out << " (" << c.row << "," << c.col << ")";
        out << "\n";
    }
    return out.str();
}

}  // namespace cocbs
