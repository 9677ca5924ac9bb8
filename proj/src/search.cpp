#include "search.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <deque>
#include <queue>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "mdd.hpp"
#include "pathfinding.hpp"

namespace cocbs {

int compute_soc(const Solution& solution) {
    int soc = 0;
    for (const auto& plan : solution.plans) soc += plan->leader.finish_time() + plan->follower.finish_time();
    return soc;
}

std::vector<Conflict> detect_conflicts(const Solution& solution, const MeetingSet& meetings) {
    std::vector<Conflict> out;
    const int agents = 2 * solution.num_tasks();
    int max_finish = 0;
    for (int a = 0; a < agents; ++a)
        max_finish = std::max(max_finish, solution.agent_path(a).finish_time());

    for (int t = 0; t <= max_finish; ++t) {
        for (int a = 0; a < agents; ++a) {
            const Path& pa = solution.agent_path(a);
            if (!pa.active_at(t)) continue;
            for (int b = a + 1; b < agents; ++b) {
                const Path& pb = solution.agent_path(b);
                if (pb.active_at(t) && pa.at(t) == pb.at(t)) {
                    bool sanctioned = false;
                    if (Instance::task_of(a) == Instance::task_of(b)) {
                        const Meeting& m = meetings.meetings[static_cast<size_t>(Instance::task_of(a))];
                        sanctioned = (pa.at(t) == m.loc && t == m.time);
                    }
                    if (!sanctioned)
                        out.push_back(Conflict{a, b, ConstraintKind::Vertex, pa.at(t), Cell{}, t});
                } else if (pa.active_at(t + 1) && pb.active_at(t) && pb.active_at(t + 1) &&
                           pa.at(t) == pb.at(t + 1) && pa.at(t + 1) == pb.at(t) &&
                           pa.at(t) != pa.at(t + 1)) {
                    out.push_back(Conflict{a, b, ConstraintKind::Edge, pa.at(t + 1), pa.at(t), t});
                }
            }
        }
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

struct CtNode {
    int64_t id = 0;
    const CtNode* parent = nullptr;
    bool is_root = false;
    bool planned = false;
    int changed_task = -1;            // pair whose meeting differs from the parent root; -1 = all
    std::optional<Constraint> added;  // split constraint introduced at this node
    int cost = 0;                     // SOC when planned; meeting-set cost for unplanned roots
    int conflict_count = 0;
    MeetingSet meetings;
    std::vector<uint32_t> positions;  // per-task index into the sorted meeting stream
    Solution solution;
    std::vector<Conflict> conflicts;
};

// Queue entries snapshot ordering keys at push time; node contents never
// change after being pushed (a re-priced root is pushed as a fresh entry).
struct QueueEntry {
    int cost;
    int conflict_count;
    int64_t id;
    CtNode* node;
    bool operator>(const QueueEntry& o) const {
        return std::tuple(cost, conflict_count, id) > std::tuple(o.cost, o.conflict_count, o.id);
    }
};

using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>>;

struct Solver {
    const Instance& inst;
    const SolveOptions& opts;
    Clock::time_point deadline;
    SearchStats stats;

    std::vector<MeetingTable> tables;
    std::unordered_map<int, DistanceField> meeting_fields;  // keyed by meeting cell index
    std::vector<DistanceField> leader_start_fields;         // per task, PC classification only
    std::unordered_map<int64_t, DistanceField> meeting_avoid_goal_fields;  // task * cells + cell

    // Memoized MDDs for constrained agents: the same (agent, meeting, cost,
    // constraint chain) combination recurs throughout a subtree whenever
    // other agents pick up constraints. Flushed wholesale at the size cap.
    struct MddCacheKey {
        int agent = 0;
        int mu_idx = 0;
        int mu_t = 0;
        int cost = -1;  // follower path length; -1 for leaders
        std::vector<Constraint> constraints;
        bool operator==(const MddCacheKey&) const = default;
    };
    struct MddCacheKeyHash {
        size_t operator()(const MddCacheKey& k) const {
            uint64_t h = (static_cast<uint64_t>(static_cast<uint32_t>(k.agent)) << 40) ^
                         (static_cast<uint64_t>(static_cast<uint32_t>(k.mu_idx)) << 20) ^
                         (static_cast<uint64_t>(static_cast<uint32_t>(k.mu_t)) << 8) ^
                         static_cast<uint64_t>(static_cast<uint32_t>(k.cost + 1));
            for (const Constraint& c : k.constraints) {
                uint64_t packed = (static_cast<uint64_t>(static_cast<uint32_t>(c.t)) << 34) ^
                                  (static_cast<uint64_t>(static_cast<uint32_t>(c.v.row)) << 26) ^
                                  (static_cast<uint64_t>(static_cast<uint32_t>(c.v.col)) << 18) ^
                                  (static_cast<uint64_t>(static_cast<uint32_t>(c.u.row)) << 10) ^
                                  (static_cast<uint64_t>(static_cast<uint32_t>(c.u.col)) << 2) ^
                                  static_cast<uint64_t>(c.kind);
                h ^= packed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            }
            return std::hash<uint64_t>()(h);
        }
    };
    static constexpr size_t kMddCacheCap = 4096;
    std::unordered_map<MddCacheKey, std::shared_ptr<const Mdd>, MddCacheKeyHash> mdd_cache;

    std::deque<CtNode> arena;
    int64_t next_id = 0;
    std::set<std::vector<uint32_t>> seen_positions;
    MinQueue open;        // regular (conflict-split) nodes
    MinQueue open_roots;  // meeting-level roots

    Solver(const Instance& i, const SolveOptions& o, Clock::time_point dl) : inst(i), opts(o), deadline(dl) {}

    const DistanceField& meeting_field(Cell loc) {
        int idx = inst.map.index(loc);
        auto it = meeting_fields.find(idx);
        if (it == meeting_fields.end())
            it = meeting_fields.emplace(idx, compute_distance_field(inst.map, loc)).first;
        return it->second;
    }

    // Distance from a meeting cell with the task's goal removed, used by the
    // follower MDD probe (the goal may only be touched as the final step).
    const DistanceField& meeting_avoid_goal_field(int task, Cell loc) {
        int64_t key = static_cast<int64_t>(task) * inst.map.size() + inst.map.index(loc);
        auto it = meeting_avoid_goal_fields.find(key);
        if (it == meeting_avoid_goal_fields.end())
            it = meeting_avoid_goal_fields
                     .emplace(key, compute_distance_field(inst.map, loc,
                                                          inst.tasks[static_cast<size_t>(task)].goal))
                     .first;
        return it->second;
    }

    std::optional<Path> plan_agent(int agent, const Meeting& m, const ConstraintSet& constraints) {
        ++stats.planner_calls;
        int task = Instance::task_of(agent);
        MeetingTable& table = tables[static_cast<size_t>(task)];
        PlannerFields fields;
        fields.from_meeting = &meeting_field(m.loc);
        if (Instance::is_leader(agent)) {
            fields.from_task_start = &table.from_task_start();
            return plan_leader_path(inst.map, inst.leader_starts[static_cast<size_t>(task)],
                                    inst.tasks[static_cast<size_t>(task)].start, m, constraints, fields);
        }
        fields.from_goal = &table.from_goal();
        return plan_follower_path(inst.map, inst.follower_starts[static_cast<size_t>(task)],
                                  inst.tasks[static_cast<size_t>(task)].goal, m, constraints, fields);
    }

    ConstraintSet gather_constraints(const CtNode* node, int agent) const {
        ConstraintSet set(inst.map);
        for (const CtNode* n = node; n; n = n->parent)
            if (n->added && n->added->agent == agent) set.add(inst.map, *n->added);
        return set;
    }

    void finalize_planned(CtNode& node) {
        node.planned = true;
        node.cost = compute_soc(node.solution);
        node.conflicts = detect_conflicts(node.solution, node.meetings);
        node.conflict_count = static_cast<int>(node.conflicts.size());
    }

    // Builds the root's full solution: unconstrained pair plans, inheriting
    // the parent root's plans for unchanged pairs. Always feasible, since a
    // finite meeting cost certifies the pair's reachability deadlines.
    void plan_root(CtNode& node) {
        ConstraintSet none(inst.map);
        int from = 0, to = inst.num_tasks();
        if (node.parent != nullptr && node.changed_task >= 0) {
            node.solution = node.parent->solution;
            from = node.changed_task;
            to = node.changed_task + 1;
        } else {
            node.solution.plans.assign(static_cast<size_t>(inst.num_tasks()), nullptr);
        }
        for (int i = from; i < to; ++i) {
            const Meeting& m = node.meetings.meetings[static_cast<size_t>(i)];
            auto leader = plan_agent(Instance::leader_of(i), m, none);
            auto follower = plan_agent(Instance::follower_of(i), m, none);
            if (!leader || !follower) throw std::logic_error("root pair plan infeasible for a finite-cost meeting");
            node.solution.plans[static_cast<size_t>(i)] =
                std::make_shared<TaskPlan>(TaskPlan{std::move(*leader), std::move(*follower)});
        }
        finalize_planned(node);
    }

    void push_root(CtNode& node) { open_roots.push(QueueEntry{node.cost, node.conflict_count, node.id, &node}); }

    CtNode& make_root(const CtNode* parent, std::vector<uint32_t> positions, MeetingSet meetings,
                      int changed_task) {
        CtNode& node = arena.emplace_back();
        node.id = next_id++;
        node.parent = parent;
        node.is_root = true;
        node.changed_task = changed_task;
        node.meetings = std::move(meetings);
        node.positions = std::move(positions);
        ++stats.meeting_sets_generated;
        if (opts.use_le)
            node.cost = node.meetings.cost;
        else
            plan_root(node);
        push_root(node);
        return node;
    }

    // Meeting-level expansion: one child per task, advancing that task's
    // stream position by one. Duplicate assignments (lattice diamonds) are
    // suppressed.
    void expand_root(CtNode& node) {
        for (int i = 0; i < inst.num_tasks(); ++i) {
            std::vector<uint32_t> positions = node.positions;
            positions[static_cast<size_t>(i)] += 1;
            if (!seen_positions.insert(positions).second) continue;
            MeetingTable& table = tables[static_cast<size_t>(i)];
            Meeting m = table.meeting_at(positions[static_cast<size_t>(i)]);
            MeetingSet meetings = node.meetings;
            meetings.cost += table.cost_at_pos(positions[static_cast<size_t>(i)]) -
                             table.cost_at_pos(node.positions[static_cast<size_t>(i)]);
            meetings.meetings[static_cast<size_t>(i)] = m;
            make_root(&node, std::move(positions), std::move(meetings), i);
        }
    }

    // Conflict split: one child per conflicting agent, each forbidden its
    // side of the collision; only that agent is replanned. Children whose
    // agent has no remaining path are discarded.
    void split(CtNode& node, const Conflict& conflict) {
        for (int side = 0; side < 2; ++side) {
            int agent = (side == 0) ? conflict.agent_a : conflict.agent_b;
            Constraint constraint;
            constraint.agent = agent;
            constraint.kind = conflict.kind;
            constraint.t = conflict.time;
            if (conflict.kind == ConstraintKind::Vertex) {
                constraint.v = conflict.v;
            } else if (side == 0) {
                constraint.u = conflict.u;  // forbids the move u -> v
                constraint.v = conflict.v;
            } else {
                constraint.u = conflict.v;  // the reverse move for the second agent
                constraint.v = conflict.u;
            }

            CtNode& child = arena.emplace_back();
            child.id = next_id++;
            child.parent = &node;
            child.added = constraint;
            child.meetings = node.meetings;
            child.positions = node.positions;
            child.changed_task = -1;

            int task = Instance::task_of(agent);
            ConstraintSet constraints = gather_constraints(&child, agent);
            auto replanned = plan_agent(agent, child.meetings.meetings[static_cast<size_t>(task)], constraints);
            if (!replanned) {
                arena.pop_back();
                continue;
            }
            child.solution = node.solution;
            auto plan = std::make_shared<TaskPlan>(*node.solution.plans[static_cast<size_t>(task)]);
            if (Instance::is_leader(agent))
                plan->leader = std::move(*replanned);
            else
                plan->follower = std::move(*replanned);
            child.solution.plans[static_cast<size_t>(task)] = std::move(plan);
            finalize_planned(child);
            open.push(QueueEntry{child.cost, child.conflict_count, child.id, &child});
        }
    }

    // Split target: without PC, the earliest conflict. With PC, conflicts
    // are scanned in (time, pair) order and classified lazily; the first
    // cardinal wins outright, else the first semi-cardinal, else the first.
    const Conflict& choose_conflict(const CtNode& node) {
        if (!opts.use_pc || node.conflicts.size() == 1) return node.conflicts.front();
        // Constraint-free agents (all agents at roots, most elsewhere) are
        // classified through the closed-form probe; only constrained agents
        // pay for a materialized MDD.
        struct View {
            std::optional<MddProbe> probe;
            std::shared_ptr<const Mdd> mdd;
            bool forced_at(int t, Cell c) const {
                return probe ? probe->singleton_at(t, c) : mdd->singleton_at(t, c);
            }
        };
        std::unordered_map<int, View> views;
        auto view_for = [&](int agent) -> const View& {
            auto it = views.find(agent);
            if (it != views.end()) return it->second;
            size_t task = static_cast<size_t>(Instance::task_of(agent));
            const Meeting& m = node.meetings.meetings[task];
            std::vector<Constraint> chain;
            for (const CtNode* nn = &node; nn; nn = nn->parent)
                if (nn->added && nn->added->agent == agent) chain.push_back(*nn->added);
            View view;
            bool is_leader = Instance::is_leader(agent);
            int cost = is_leader ? -1 : node.solution.plans[task]->follower.finish_time();
            if (chain.empty()) {
                if (is_leader)
                    view.probe = MddProbe::leader(leader_start_fields[task], tables[task].from_task_start(),
                                                  meeting_field(m.loc), inst.tasks[task].start, m);
                else
                    view.probe = MddProbe::follower(tables[task].from_follower_start(), meeting_field(m.loc),
                                                    tables[task].from_goal(),
                                                    meeting_avoid_goal_field(static_cast<int>(task), m.loc),
                                                    inst.tasks[task].goal, m, cost);
            } else {
                MddCacheKey key{agent, inst.map.index(m.loc), m.time, cost, std::move(chain)};
                auto hit = mdd_cache.find(key);
                if (hit == mdd_cache.end()) {
                    ConstraintSet constraints(inst.map, key.constraints, agent);
                    Mdd built = is_leader
                                    ? build_leader_mdd(inst.map, inst.leader_starts[task],
                                                       inst.tasks[task].start, m, constraints)
                                    : build_follower_mdd(inst.map, inst.follower_starts[task],
                                                         inst.tasks[task].goal, m, constraints, cost);
                    if (mdd_cache.size() >= kMddCacheCap) mdd_cache.clear();
                    hit = mdd_cache.emplace(std::move(key), std::make_shared<const Mdd>(std::move(built)))
                              .first;
                }
                view.mdd = hit->second;
            }
            return views.emplace(agent, std::move(view)).first->second;
        };

        size_t first_semi = SIZE_MAX;
        for (size_t i = 0; i < node.conflicts.size(); ++i) {
            const Conflict& c = node.conflicts[i];
            const View& va = view_for(c.agent_a);
            const View& vb = view_for(c.agent_b);
            ConflictClass cls = classify_conflict_with(
                c, [&](int t, Cell v) { return va.forced_at(t, v); },
                [&](int t, Cell v) { return vb.forced_at(t, v); });
            if (cls == ConflictClass::Cardinal) return node.conflicts[i];
            if (cls == ConflictClass::SemiCardinal && first_semi == SIZE_MAX) first_semi = i;
        }
        return node.conflicts[first_semi != SIZE_MAX ? first_semi : 0];
    }

    SolveResult run(SolveResult res, Clock::time_point t0) {
        tables = build_meeting_tables(inst);
        for (const auto& t : tables) {
            if (t.stream_empty()) {
                res.status = SolveStatus::Unsolvable;
                return finish(res, t0);
            }
        }
        if (opts.use_pc)
            for (const Cell& start : inst.leader_starts)
                leader_start_fields.push_back(compute_distance_field(inst.map, start));

        std::vector<uint32_t> origin(static_cast<size_t>(inst.num_tasks()), 0);
        MeetingSet first = initial_meeting_set(tables);
        seen_positions.insert(origin);
        make_root(nullptr, std::move(origin), std::move(first), -1);

        while (!open.empty() || !open_roots.empty()) {
            if (Clock::now() >= deadline) {
                res.status = SolveStatus::Timeout;
                return finish(res, t0);
            }
            bool take_regular;
            if (open.empty())
                take_regular = false;
            else if (open_roots.empty())
                take_regular = true;
            else
                take_regular = open.top().cost <= open_roots.top().cost;

            CtNode* node;
            if (take_regular) {
                node = open.top().node;
                open.pop();
            } else {
                node = open_roots.top().node;
                open_roots.pop();
                if (!node->planned) {
                    plan_root(*node);
                    if (node->cost > node->meetings.cost) {
                        // Deferred pricing guard: re-queue at the true cost.
                        // Unreachable for exact meeting tables, kept as a
                        // safety net.
                        push_root(*node);
                        continue;
                    }
                }
            }

            if (node->conflicts.empty()) {
                res.status = SolveStatus::Solved;
                res.cost = node->cost;
                res.meetings = node->meetings;
                res.solution = node->solution;
                stats.first_set_solved =
                    std::all_of(node->positions.begin(), node->positions.end(), [](uint32_t p) { return p == 0; });
                return finish(res, t0);
            }

            if (node->is_root) {
                ++stats.roots_expanded;
                expand_root(*node);
            } else {
                ++stats.regulars_expanded;
            }
            split(*node, choose_conflict(*node));
        }

        res.status = SolveStatus::Unsolvable;  // unreachable for well-formed instances
        return finish(res, t0);
    }

    SolveResult finish(SolveResult res, Clock::time_point t0) {
        stats.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        res.stats = stats;
        return res;
    }
};

}  // namespace

SolveResult solve(const Instance& inst, const SolveOptions& options) {
    auto t0 = Clock::now();
    auto deadline = t0 + std::chrono::milliseconds(options.timeout_ms);
    SolveResult res;
    res.well_formed = is_well_formed(inst);
    if (!res.well_formed.well_formed && !options.skip_well_formed_check) {
        res.status = SolveStatus::NotWellFormed;
        res.stats.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return res;
    }
    if (inst.num_tasks() == 0) {
        res.status = SolveStatus::Solved;
        res.cost = 0;
        res.stats.meeting_sets_generated = 1;
        res.stats.first_set_solved = true;
        res.stats.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        return res;
    }
    Solver solver(inst, options, deadline);
    return solver.run(std::move(res), t0);
}

std::string solution_to_json(const SolveResult& result) {
    nlohmann::json j;
    switch (result.status) {
        case SolveStatus::Solved: j["status"] = "solved"; break;
        case SolveStatus::Timeout: j["status"] = "timeout"; break;
        case SolveStatus::NotWellFormed: j["status"] = "not-well-formed"; break;
        case SolveStatus::Unsolvable: j["status"] = "unsolvable"; break;
    }
    if (result.status == SolveStatus::Solved) {
        j["cost"] = result.cost;
        nlohmann::json tasks = nlohmann::json::array();
        for (size_t i = 0; i < result.solution.plans.size(); ++i) {
            const Meeting& m = result.meetings.meetings[i];
            nlohmann::json entry;
            entry["meeting"] = {{"cell", {m.loc.row, m.loc.col}}, {"t", m.time}};
            auto path_json = [](const Path& p) {
                nlohmann::json arr = nlohmann::json::array();
                for (const Cell& c : p.cells) arr.push_back({c.row, c.col});
                return arr;
            };
            entry["leader_path"] = path_json(result.solution.plans[i]->leader);
            entry["follower_path"] = path_json(result.solution.plans[i]->follower);
            tasks.push_back(std::move(entry));
        }
        j["tasks"] = std::move(tasks);
    }
    if (result.status == SolveStatus::NotWellFormed) j["diagnostic"] = result.well_formed.message;
    j["stats"] = {{"meeting_sets", result.stats.meeting_sets_generated},
                  {"first_set_solved", result.stats.first_set_solved ? 1 : 0},
                  {"roots_expanded", result.stats.roots_expanded},
                  {"regulars_expanded", result.stats.regulars_expanded},
                  {"planner_calls", result.stats.planner_calls},
                  {"time_ms", result.stats.time_ms}};
    return j.dump(2);
}

}  // namespace cocbs
