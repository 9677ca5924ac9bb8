#include "pathfinding.hpp"

#include <algorithm>
#include <cassert>

namespace cocbs {

namespace {

DistanceField bfs_field(const GridMap& map, Cell source, int avoid_idx) {
    DistanceField f;
    f.source = source;
    f.width = map.width();
    f.dist.assign(static_cast<size_t>(map.size()), kUnreachable);
    if (!map.traversable(source)) return f;
    std::vector<int> queue;
    queue.reserve(static_cast<size_t>(map.free_count()));
    f.dist[static_cast<size_t>(map.index(source))] = 0;
    queue.push_back(map.index(source));
    for (size_t head = 0; head < queue.size(); ++head) {
        int idx = queue[head];
        Cell c = map.cell(idx);
        int d = f.dist[static_cast<size_t>(idx)];
        for (const auto& m : GridMap::kMoves) {
            Cell n{c.row + m[0], c.col + m[1]};
            if (!map.traversable(n)) continue;
            int nidx = map.index(n);
            if (nidx == avoid_idx) continue;
            if (f.dist[static_cast<size_t>(nidx)] != kUnreachable) continue;
            f.dist[static_cast<size_t>(nidx)] = d + 1;
            queue.push_back(nidx);
        }
    }
    return f;
}

}  // namespace

DistanceField compute_distance_field(const GridMap& map, Cell source) {
    return bfs_field(map, source, -1);
}

DistanceField compute_distance_field(const GridMap& map, Cell source, Cell avoid) {
    return bfs_field(map, source, map.in_bounds(avoid) ? map.index(avoid) : -1);
}

ConstraintSet::ConstraintSet(const GridMap& map, std::span<const Constraint> all, int agent)
    : cells_(map.size()) {
    for (const Constraint& c : all)
        if (c.agent == agent) add(map, c);
}

void ConstraintSet::add(const GridMap& map, const Constraint& c) {
    if (cells_ == 0) cells_ = map.size();
    if (c.kind == ConstraintKind::Vertex) {
        if (blocks_vertex(map.index(c.v), c.t)) return;  // set semantics: ignore duplicates
        if (c.t >= static_cast<int>(vertex_by_t_.size())) vertex_by_t_.resize(static_cast<size_t>(c.t) + 1);
        vertex_by_t_[static_cast<size_t>(c.t)].push_back(map.index(c.v));
    } else {
        if (blocks_edge(map.index(c.u), map.index(c.v), c.t)) return;
        if (c.t >= static_cast<int>(edge_by_t_.size())) edge_by_t_.resize(static_cast<size_t>(c.t) + 1);
        edge_by_t_[static_cast<size_t>(c.t)].push_back(static_cast<int64_t>(map.index(c.u)) * cells_ +
                                                       map.index(c.v));
    }
    latest_ = std::max(latest_, c.t);
    ++count_;
}

namespace {

// Per-thread buffers recycled across planner calls: the planners run in the
// search's hottest loop, and re-allocating one parent array per time layer
// dominated their profile. Binding compares the full map, not just its size,
// so maps of equal area but different shape or obstacles rebuild the tables.
struct PlannerScratch {
    std::optional<GridMap> bound;  // map the tables below were built for
    int n = 0;                     // cells per phase
    std::vector<int32_t> order;          // slot -> (col, row, phase) rank
    std::vector<int32_t> neighbors;      // 4 entries per cell, kMoves order
    std::vector<uint8_t> neighbor_count;
    std::vector<std::vector<int32_t>> pool;  // spare layer buffers

    void bind(const GridMap& map) {
        if (bound && *bound == map) return;
        bound = map;
        n = map.size();
        pool.clear();
        order.resize(static_cast<size_t>(2 * n));
        for (int phase = 0; phase < 2; ++phase)
            for (int idx = 0; idx < n; ++idx) {
                const Cell c = map.cell(idx);
                order[static_cast<size_t>(phase * n + idx)] = (c.col * map.height() + c.row) * 2 + phase;
            }
        neighbors.assign(static_cast<size_t>(4 * n), -1);
        neighbor_count.assign(static_cast<size_t>(n), 0);
        for (int idx = 0; idx < n; ++idx) {
            const Cell c = map.cell(idx);
            if (!map.traversable(c)) continue;
            for (const auto& m : GridMap::kMoves) {
                Cell to{c.row + m[0], c.col + m[1]};
                if (!map.traversable(to)) continue;
                neighbors[static_cast<size_t>(idx * 4 + neighbor_count[static_cast<size_t>(idx)]++)] =
                    map.index(to);
            }
        }
    }

    std::vector<int32_t> take_layer() {
        if (pool.empty()) return std::vector<int32_t>(static_cast<size_t>(2 * n), -1);
        std::vector<int32_t> layer = std::move(pool.back());
        pool.pop_back();
        layer.assign(static_cast<size_t>(2 * n), -1);
        return layer;
    }
};

thread_local PlannerScratch tls_scratch;

// Space-time breadth-first search over (cell, phase) layers. Each layer t
// stores, per slot = phase * ncells + cell, the slot it was first generated
// from in layer t-1 (-1 unvisited, -2 search root). Frontiers are expanded in
// sorted (col, row, phase) order, so together with first-generation-wins the
// search is fully deterministic.
struct LayeredSearch {
    const GridMap& map;
    int n;  // cells per phase
    PlannerScratch& scratch;
    std::vector<std::vector<int32_t>> parent;
    std::vector<int32_t> frontier;
    std::vector<int32_t> next;

    explicit LayeredSearch(const GridMap& m) : map(m), n(m.size()), scratch(tls_scratch) {
        scratch.bind(m);
    }

    ~LayeredSearch() {
        for (auto& layer : parent) scratch.pool.push_back(std::move(layer));
    }

    void push_layer() { parent.push_back(scratch.take_layer()); }

    void seed(int slot) {
        push_layer();
        parent[0][static_cast<size_t>(slot)] = -2;
        frontier.assign(1, slot);
    }

    void sort_frontier() {
        std::sort(frontier.begin(), frontier.end(), [this](int32_t a, int32_t b) {
            return scratch.order[static_cast<size_t>(a)] < scratch.order[static_cast<size_t>(b)];
        });
    }

    bool visited(int t, int slot) const { return parent[static_cast<size_t>(t)][static_cast<size_t>(slot)] != -1; }

    Path reconstruct(int t, int slot) const {
        Path p;
        p.cells.resize(static_cast<size_t>(t) + 1);
        for (int i = t; i >= 0; --i) {
            p.cells[static_cast<size_t>(i)] = map.cell(slot % n);
            slot = parent[static_cast<size_t>(i)][static_cast<size_t>(slot)];
        }
        return p;
    }
};

}  // namespace

std::optional<Path> plan_leader_path(const GridMap& map, Cell start, Cell task_start,
                                     const Meeting& meeting, const ConstraintSet& constraints,
                                     const PlannerFields& fields) {
    assert(fields.from_task_start && fields.from_meeting);
    if (!map.traversable(start) || !map.traversable(task_start) || !map.traversable(meeting.loc))
        return std::nullopt;
    const int mu_t = meeting.time;
    const DistanceField& d_s = *fields.from_task_start;
    const DistanceField& d_m = *fields.from_meeting;
    const int s_to_meeting = d_s.at(meeting.loc);
    if (s_to_meeting == kUnreachable) return std::nullopt;

    const int n = map.size();
    // Phase 0: payload not yet picked up; phase 1: task start already visited.
    auto feasible = [&](int cell_idx, int phase, int t) {
        if (phase == 0) {
            int detour = dist_plus(d_s.at_index(cell_idx), s_to_meeting);
            return detour != kUnreachable && t + detour <= mu_t;
        }
        int direct = d_m.at_index(cell_idx);
        return direct != kUnreachable && t + direct <= mu_t;
    };

    int start_idx = map.index(start);
    int start_phase = (start == task_start) ? 1 : 0;
    if (constraints.blocks_vertex(start_idx, 0)) return std::nullopt;
    if (!feasible(start_idx, start_phase, 0)) return std::nullopt;

    LayeredSearch ls(map);
    ls.seed(start_phase * n + start_idx);

    const int s_idx = map.index(task_start);
    for (int t = 0; t < mu_t; ++t) {
        ls.push_layer();
        ls.sort_frontier();
        ls.next.clear();
        int32_t* next_parent = ls.parent[static_cast<size_t>(t) + 1].data();
        for (int32_t slot : ls.frontier) {
            int phase = slot / n;
            int idx = slot % n;
            auto try_step = [&](int to_idx) {
                if (constraints.blocks_vertex(to_idx, t + 1)) return;
                if (constraints.blocks_edge(idx, to_idx, t)) return;
                int to_phase = (phase == 1 || to_idx == s_idx) ? 1 : 0;
                if (!feasible(to_idx, to_phase, t + 1)) return;
                int to_slot = to_phase * n + to_idx;
                if (next_parent[to_slot] != -1) return;
                next_parent[to_slot] = slot;
                ls.next.push_back(to_slot);
            };
            const int32_t* nb = &ls.scratch.neighbors[static_cast<size_t>(idx * 4)];
            const int cnt = ls.scratch.neighbor_count[static_cast<size_t>(idx)];
            for (int j = 0; j < cnt; ++j) try_step(nb[j]);
            try_step(idx);  // wait
        }
        if (ls.next.empty()) return std::nullopt;
        std::swap(ls.frontier, ls.next);
    }

    int goal_slot = 1 * n + map.index(meeting.loc);
    if (!ls.visited(mu_t, goal_slot)) return std::nullopt;
    return ls.reconstruct(mu_t, goal_slot);
}

std::optional<Path> plan_follower_path(const GridMap& map, Cell start, Cell goal,
                                       const Meeting& meeting, const ConstraintSet& constraints,
                                       const PlannerFields& fields) {
    assert(fields.from_meeting && fields.from_goal);
    if (!map.traversable(start) || !map.traversable(goal) || !map.traversable(meeting.loc))
        return std::nullopt;
    const int mu_t = meeting.time;
    const DistanceField& d_m = *fields.from_meeting;
    const DistanceField& d_g = *fields.from_goal;
    const int n = map.size();
    const int horizon = std::max(mu_t, constraints.latest_time()) + map.free_count() + 1;

    // Phase 0: heading to the meeting; phase 1: payload received. The phase
    // flips only by occupying meeting.loc exactly at meeting.time, and the
    // path ends at the first phase-1 occupancy of the goal cell.
    auto feasible = [&](int cell_idx, int phase, int t) {
        if (phase == 0) {
            int d = d_m.at_index(cell_idx);
            return d != kUnreachable && t + d <= mu_t;
        }
        return d_g.at_index(cell_idx) != kUnreachable;
    };

    int start_idx = map.index(start);
    int start_phase = (mu_t == 0 && start == meeting.loc) ? 1 : 0;
    if (constraints.blocks_vertex(start_idx, 0)) return std::nullopt;
    if (!feasible(start_idx, start_phase, 0)) return std::nullopt;

    LayeredSearch ls(map);
    ls.seed(start_phase * n + start_idx);

    const int goal_slot = 1 * n + map.index(goal);
    const int meeting_idx = map.index(meeting.loc);
    for (int t = 0; t <= horizon; ++t) {
        if (t >= mu_t && ls.visited(t, goal_slot)) return ls.reconstruct(t, goal_slot);
        if (t == horizon) break;
        ls.push_layer();
        ls.sort_frontier();
        ls.next.clear();
        int32_t* next_parent = ls.parent[static_cast<size_t>(t) + 1].data();
        for (int32_t slot : ls.frontier) {
            int phase = slot / n;
            int idx = slot % n;
            auto try_step = [&](int to_idx) {
                if (constraints.blocks_vertex(to_idx, t + 1)) return;
                if (constraints.blocks_edge(idx, to_idx, t)) return;
                int to_phase = phase;
                if (phase == 0 && t + 1 == mu_t && to_idx == meeting_idx) to_phase = 1;
                if (!feasible(to_idx, to_phase, t + 1)) return;
                int to_slot = to_phase * n + to_idx;
                if (next_parent[to_slot] != -1) return;
                next_parent[to_slot] = slot;
                ls.next.push_back(to_slot);
            };
            const int32_t* nb = &ls.scratch.neighbors[static_cast<size_t>(idx * 4)];
            const int cnt = ls.scratch.neighbor_count[static_cast<size_t>(idx)];
            for (int j = 0; j < cnt; ++j) try_step(nb[j]);
            try_step(idx);  // wait
        }
        if (ls.next.empty()) return std::nullopt;
        std::swap(ls.frontier, ls.next);
    }
    return std::nullopt;
}

}  // namespace cocbs
