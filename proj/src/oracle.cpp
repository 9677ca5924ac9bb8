#include "oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>

namespace cocbs {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

int sat_add(int a, int b) { return (a == kInf || b == kInf) ? kInf : a + b; }

// Oracle-local BFS; deliberately not shared with the solver's machinery.
std::vector<int> bfs(const GridMap& map, Cell src) {
    std::vector<int> dist(static_cast<size_t>(map.size()), kInf);
    if (!map.traversable(src)) return dist;
    std::vector<int> queue{map.index(src)};
    dist[static_cast<size_t>(map.index(src))] = 0;
    for (size_t head = 0; head < queue.size(); ++head) {
        Cell c = map.cell(queue[head]);
        int d = dist[static_cast<size_t>(queue[head])];
        for (const auto& m : GridMap::kMoves) {
            Cell n{c.row + m[0], c.col + m[1]};
            if (!map.traversable(n)) continue;
            int nidx = map.index(n);
            if (dist[static_cast<size_t>(nidx)] != kInf) continue;
            dist[static_cast<size_t>(nidx)] = d + 1;
            queue.push_back(nidx);
        }
    }
    return dist;
}

struct TaskGeom {
    std::vector<int> from_s, from_f, from_g;
    int leader_to_s = kInf;
    int s_to_meeting = kInf;  // per current meeting vector
};

struct MeetingCand {
    int cost;
    Cell loc;
    int time;
};

struct ResourceOut {};

// Joint state key: [t, slot_agent0, slot_agent1, ...]. Leader slots encode
// pos * 2 + picked; follower slots encode pos; -1 means the agent finished
// and left the grid.
using Key = std::vector<int16_t>;

struct JointSearcher {
    const Instance& inst;
    std::vector<TaskGeom>& geom;
    const std::vector<Meeting>& meetings;
    std::vector<const std::vector<int>*> from_meeting;  // per task
    int bound;
    int64_t& budget;

    struct Record {
        int g;
        Key parent;
    };
    std::map<Key, Record> table;

    struct Entry {
        int f;
        Key key;
        bool operator>(const Entry& o) const { return std::tie(f, key) > std::tie(o.f, o.key); }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> openq;

    JointSearcher(const Instance& i, std::vector<TaskGeom>& g, const std::vector<Meeting>& m,
                  std::vector<const std::vector<int>*> fm, int b, int64_t& bud)
        : inst(i), geom(g), meetings(m), from_meeting(std::move(fm)), bound(b), budget(bud) {}

    int heuristic(const Key& key) const {
        int t = key[0];
        int h = 0;
        for (int i = 0; i < inst.num_tasks(); ++i) {
            const Meeting& m = meetings[static_cast<size_t>(i)];
            int16_t ls = key[static_cast<size_t>(1 + 2 * i)];
            int16_t fs = key[static_cast<size_t>(2 + 2 * i)];
            if (ls != -1) h = sat_add(h, m.time - t);
            if (fs != -1) {
                const auto& d_g = geom[static_cast<size_t>(i)].from_g;
                if (t < m.time)
                    h = sat_add(h, (m.time - t) + d_g[static_cast<size_t>(inst.map.index(m.loc))]);
                else
                    h = sat_add(h, d_g[static_cast<size_t>(fs)]);
            }
        }
        return h;
    }

    bool is_goal(const Key& key) const {
        for (size_t i = 1; i < key.size(); ++i)
            if (key[i] != -1) return false;
        return true;
    }

    void offer(const Key& key, int g, const Key& parent) {
        auto it = table.find(key);
        if (it != table.end() && it->second.g <= g) return;
        int h = heuristic(key);
        if (h == kInf || g + h > bound) return;
        table[key] = Record{g, parent};
        openq.push(Entry{g + h, key});
    }

    // Returns the optimal joint cost for this meeting vector within bound,
    // along with the goal key, or nullopt.
    std::optional<std::pair<int, Key>> run() {
        Key start(static_cast<size_t>(1 + inst.num_agents()), 0);
        for (int i = 0; i < inst.num_tasks(); ++i) {
            Cell l = inst.leader_starts[static_cast<size_t>(i)];
            Cell f = inst.follower_starts[static_cast<size_t>(i)];
            int picked = (l == inst.tasks[static_cast<size_t>(i)].start) ? 1 : 0;
            start[static_cast<size_t>(1 + 2 * i)] = static_cast<int16_t>(inst.map.index(l) * 2 + picked);
            start[static_cast<size_t>(2 + 2 * i)] = static_cast<int16_t>(inst.map.index(f));
        }
        offer(start, 0, Key{});
        while (!openq.empty()) {
            Entry top = openq.top();
            openq.pop();
            auto it = table.find(top.key);
            if (it == table.end()) continue;
            int g = it->second.g;
            int h = heuristic(top.key);
            if (h != kInf && g + h < top.f) continue;  // stale entry
            if (is_goal(top.key)) return std::make_pair(g, top.key);
            if (--budget <= 0) throw ResourceOut{};
            expand(top.key, g);
        }
        return std::nullopt;
    }

    void expand(const Key& key, int g) {
        const int t = key[0];
        const int k = inst.num_tasks();
        const GridMap& map = inst.map;

        // Per agent: either a forced next slot (finished -> -1) or a list of
        // candidate slots. paying = takes part in this transition's cost.
        struct AgentMoves {
            bool paying = false;
            std::vector<int16_t> choices;  // -1 entry = forced disappearance
        };
        std::vector<AgentMoves> moves(static_cast<size_t>(2 * k));
        for (int i = 0; i < k; ++i) {
            const Meeting& m = meetings[static_cast<size_t>(i)];
            const TaskGeom& tg = geom[static_cast<size_t>(i)];
            const std::vector<int>& d_m = *from_meeting[static_cast<size_t>(i)];
            int meeting_idx = map.index(m.loc);
            int goal_idx = map.index(inst.tasks[static_cast<size_t>(i)].goal);
            int s_idx = map.index(inst.tasks[static_cast<size_t>(i)].start);

            // Leader.
            {
                AgentMoves& am = moves[static_cast<size_t>(2 * i)];
                int16_t slot = key[static_cast<size_t>(1 + 2 * i)];
                if (slot == -1 || t == m.time) {
                    am.choices.push_back(-1);  // finished (or already gone)
                } else {
                    am.paying = true;
                    int pos = slot / 2;
                    int picked = slot % 2;
                    Cell c = map.cell(pos);
                    auto consider = [&](Cell to) {
                        if (!map.traversable(to)) return;
                        int to_idx = map.index(to);
                        int npicked = picked || to_idx == s_idx;
                        if (npicked) {
                            if (d_m[static_cast<size_t>(to_idx)] == kInf ||
                                t + 1 + d_m[static_cast<size_t>(to_idx)] > m.time)
                                return;
                        } else {
                            int via = sat_add(tg.from_s[static_cast<size_t>(to_idx)], tg.s_to_meeting);
                            if (via == kInf || t + 1 + via > m.time) return;
                        }
                        if (t + 1 == m.time && !(to_idx == meeting_idx && npicked)) return;
                        am.choices.push_back(static_cast<int16_t>(to_idx * 2 + npicked));
                    };
                    for (const auto& mv : GridMap::kMoves) consider(Cell{c.row + mv[0], c.col + mv[1]});
                    consider(c);
                }
            }
            // Follower.
            {
                AgentMoves& am = moves[static_cast<size_t>(2 * i + 1)];
                int16_t slot = key[static_cast<size_t>(2 + 2 * i)];
                if (slot == -1 || (t >= m.time && slot == goal_idx)) {
                    am.choices.push_back(-1);  // delivered (or already gone)
                } else {
                    am.paying = true;
                    Cell c = map.cell(slot);
                    auto consider = [&](Cell to) {
                        if (!map.traversable(to)) return;
                        int to_idx = map.index(to);
                        if (t + 1 < m.time) {
                            if (d_m[static_cast<size_t>(to_idx)] == kInf ||
                                t + 1 + d_m[static_cast<size_t>(to_idx)] > m.time)
                                return;
                        } else if (t + 1 == m.time) {
                            if (to_idx != meeting_idx) return;
                        } else {
                            if (tg.from_g[static_cast<size_t>(to_idx)] == kInf) return;
                        }
                        am.choices.push_back(static_cast<int16_t>(to_idx));
                    };
                    for (const auto& mv : GridMap::kMoves) consider(Cell{c.row + mv[0], c.col + mv[1]});
                    consider(c);
                }
            }
        }

        int step_cost = 0;
        for (const auto& am : moves)
            if (am.paying) ++step_cost;

        Key next(key.size());
        next[0] = static_cast<int16_t>(t + 1);
        // Depth-first product of per-agent choices with incremental
        // vertex-collision and swap checks against already-placed agents.
        auto place = [&](auto&& self, int agent) -> void {
            if (agent == 2 * k) {
                offer(next, g + step_cost, key);
                return;
            }
            int16_t prev = key[static_cast<size_t>(1 + agent)];
            int prev_pos = -1;
            if (prev != -1) prev_pos = Instance::is_leader(agent) ? prev / 2 : prev;
            for (int16_t choice : moves[static_cast<size_t>(agent)].choices) {
                int pos = -1;
                if (choice != -1) pos = Instance::is_leader(agent) ? choice / 2 : choice;
                bool ok = true;
                if (pos != -1) {
                    for (int other = 0; other < agent && ok; ++other) {
                        int16_t oslot = next[static_cast<size_t>(1 + other)];
                        if (oslot == -1) continue;
                        int opos = Instance::is_leader(other) ? oslot / 2 : oslot;
                        if (opos == pos) {
                            bool pair_meeting = Instance::task_of(other) == Instance::task_of(agent) &&
                                                t + 1 == meetings[static_cast<size_t>(Instance::task_of(agent))].time &&
                                                pos == map.index(meetings[static_cast<size_t>(Instance::task_of(agent))].loc);
                            if (!pair_meeting) ok = false;
                        }
                        if (ok && prev_pos != -1) {
                            int16_t oprev = key[static_cast<size_t>(1 + other)];
                            if (oprev != -1) {
                                int oprev_pos = Instance::is_leader(other) ? oprev / 2 : oprev;
                                if (pos == oprev_pos && opos == prev_pos && pos != prev_pos) ok = false;
                            }
                        }
                    }
                }
                if (!ok) continue;
                next[static_cast<size_t>(1 + agent)] = choice;
                self(self, agent + 1);
            }
        };
        place(place, 0);
    }
};

}  // namespace

OracleResult solve_exhaustive(const Instance& inst, const OracleOptions& options) {
    OracleResult result;
    const int k = inst.num_tasks();
    if (k == 0) {
        result.status = OracleStatus::Optimal;
        result.cost = 0;
        return result;
    }
    const GridMap& map = inst.map;
    const int bound = options.cost_bound;
    int64_t budget = options.max_expansions;

    std::vector<TaskGeom> geom(static_cast<size_t>(k));
    std::vector<std::vector<MeetingCand>> cands(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        TaskGeom& tg = geom[static_cast<size_t>(i)];
        tg.from_s = bfs(map, inst.tasks[static_cast<size_t>(i)].start);
        tg.from_f = bfs(map, inst.follower_starts[static_cast<size_t>(i)]);
        tg.from_g = bfs(map, inst.tasks[static_cast<size_t>(i)].goal);
        tg.leader_to_s = tg.from_s[static_cast<size_t>(map.index(inst.leader_starts[static_cast<size_t>(i)]))];
        for (int idx = 0; idx < map.size(); ++idx) {
            Cell v = map.cell(idx);
            if (!map.traversable(v)) continue;
            int te = std::max(sat_add(tg.leader_to_s, tg.from_s[static_cast<size_t>(idx)]),
                              tg.from_f[static_cast<size_t>(idx)]);
            int d_goal = tg.from_g[static_cast<size_t>(idx)];
            if (te == kInf || d_goal == kInf) continue;
            for (int t = te; 2 * t + d_goal <= bound; ++t)
                cands[static_cast<size_t>(i)].push_back(MeetingCand{2 * t + d_goal, v, t});
        }
        auto& list = cands[static_cast<size_t>(i)];
        std::sort(list.begin(), list.end(), [](const MeetingCand& a, const MeetingCand& b) {
            return std::tuple(a.cost, a.loc.row, a.loc.col, a.time) <
                   std::tuple(b.cost, b.loc.row, b.loc.col, b.time);
        });
        if (list.empty()) return result;  // BoundExhausted
    }

    std::map<int, std::vector<int>> meeting_bfs;  // by meeting cell index
    auto meeting_field = [&](Cell loc) -> const std::vector<int>* {
        int idx = map.index(loc);
        auto it = meeting_bfs.find(idx);
        if (it == meeting_bfs.end()) it = meeting_bfs.emplace(idx, bfs(map, loc)).first;
        return &it->second;
    };

    // Enumerate meeting vectors in non-decreasing summed cost.
    struct VecEntry {
        int total;
        std::vector<int> ids;
        bool operator>(const VecEntry& o) const { return std::tie(total, ids) > std::tie(o.total, o.ids); }
    };
    std::priority_queue<VecEntry, std::vector<VecEntry>, std::greater<VecEntry>> heap;
    std::set<std::vector<int>> seen;
    {
        std::vector<int> zero(static_cast<size_t>(k), 0);
        int total = 0;
        for (int i = 0; i < k; ++i) total += cands[static_cast<size_t>(i)][0].cost;
        heap.push(VecEntry{total, zero});
        seen.insert(zero);
    }

    int best = kInf;
    Key best_key;
    std::map<Key, Key> best_parents;  // goal-chain snapshot for reconstruction
    std::vector<Meeting> best_meetings;

    try {
        while (!heap.empty()) {
            VecEntry entry = heap.top();
            heap.pop();
            if (entry.total > bound || entry.total >= best) break;

            std::vector<Meeting> meetings(static_cast<size_t>(k));
            std::vector<const std::vector<int>*> fm(static_cast<size_t>(k));
            for (int i = 0; i < k; ++i) {
                const MeetingCand& c = cands[static_cast<size_t>(i)][static_cast<size_t>(entry.ids[static_cast<size_t>(i)])];
                meetings[static_cast<size_t>(i)] = Meeting{c.loc, c.time};
                fm[static_cast<size_t>(i)] = meeting_field(c.loc);
                geom[static_cast<size_t>(i)].s_to_meeting =
                    geom[static_cast<size_t>(i)].from_s[static_cast<size_t>(map.index(c.loc))];
            }

            int joint_bound = std::min(bound, best == kInf ? bound : best - 1);
            JointSearcher js(inst, geom, meetings, fm, joint_bound, budget);
            if (auto found = js.run()) {
                best = found->first;
                best_key = found->second;
                best_meetings = meetings;
                best_parents.clear();
                for (Key cursor = best_key; !cursor.empty();) {
                    auto it = js.table.find(cursor);
                    if (it == js.table.end()) break;
                    best_parents[cursor] = it->second.parent;
                    cursor = it->second.parent;
                }
            }

            for (int i = 0; i < k; ++i) {
                std::vector<int> ids = entry.ids;
                ids[static_cast<size_t>(i)] += 1;
                if (ids[static_cast<size_t>(i)] >= static_cast<int>(cands[static_cast<size_t>(i)].size())) continue;
                if (!seen.insert(ids).second) continue;
                int total = entry.total - cands[static_cast<size_t>(i)][static_cast<size_t>(ids[static_cast<size_t>(i)]) - 1].cost +
                            cands[static_cast<size_t>(i)][static_cast<size_t>(ids[static_cast<size_t>(i)])].cost;
                heap.push(VecEntry{total, std::move(ids)});
            }
        }
    } catch (const ResourceOut&) {
        result.status = OracleStatus::ResourceExhausted;
        result.cost = best == kInf ? -1 : best;
        return result;
    }

    if (best == kInf) return result;  // BoundExhausted

    // Rebuild per-agent paths from the winning goal chain.
    std::vector<Key> chain;
    for (Key cursor = best_key; !cursor.empty();) {
        chain.push_back(cursor);
        auto it = best_parents.find(cursor);
        if (it == best_parents.end()) break;
        cursor = it->second;
    }
    std::reverse(chain.begin(), chain.end());
    result.paths.assign(static_cast<size_t>(2 * k), Path{});
    for (const Key& key : chain) {
        for (int a = 0; a < 2 * k; ++a) {
            int16_t slot = key[static_cast<size_t>(1 + a)];
            if (slot == -1) continue;
            int pos = Instance::is_leader(a) ? slot / 2 : slot;
            result.paths[static_cast<size_t>(a)].cells.push_back(map.cell(pos));
        }
    }
    result.status = OracleStatus::Optimal;
    result.cost = best;
    result.meetings = std::move(best_meetings);
    return result;
}

}  // namespace cocbs
