#include "validate.hpp"

#include <cstdlib>

namespace cocbs {

namespace {

std::string cell_str(Cell c) {
    return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

}  // namespace

std::vector<std::string> validate_solution(const Instance& inst, const MeetingSet& meetings,
                                           const Solution& solution) {
    std::vector<std::string> issues;
    auto issue = [&](const std::string& s) { issues.push_back(s); };

    const size_t k = static_cast<size_t>(inst.num_tasks());
    if (solution.plans.size() != k || meetings.meetings.size() != k) {
        issue("solution covers " + std::to_string(solution.plans.size()) + " tasks and names " +
              std::to_string(meetings.meetings.size()) + " meetings, instance has " + std::to_string(k));
        return issues;
    }

    auto check_walk = [&](const Path& p, Cell start, const std::string& who) {
        if (p.cells.empty()) {
            issue(who + ": empty path");
            return false;
        }
        if (p.cells.front() != start) {
            issue(who + ": path starts at " + cell_str(p.cells.front()) + ", agent starts at " + cell_str(start));
            return false;
        }
        for (size_t t = 0; t < p.cells.size(); ++t) {
            if (!inst.map.traversable(p.cells[t])) {
                issue(who + ": cell " + cell_str(p.cells[t]) + " at t=" + std::to_string(t) + " is not traversable");
                return false;
            }
            if (t > 0) {
                int dr = std::abs(p.cells[t].row - p.cells[t - 1].row);
                int dc = std::abs(p.cells[t].col - p.cells[t - 1].col);
                if (dr + dc > 1) {
                    issue(who + ": illegal step " + cell_str(p.cells[t - 1]) + " -> " + cell_str(p.cells[t]) +
                          " at t=" + std::to_string(t));
                    return false;
                }
            }
        }
        return true;
    };

    for (size_t i = 0; i < k; ++i) {
        const std::string tag = "task " + std::to_string(i);
        if (!solution.plans[i]) {
            issue(tag + ": missing plan");
            continue;
        }
        const Meeting& m = meetings.meetings[i];
        const Path& leader = solution.plans[i]->leader;
        const Path& follower = solution.plans[i]->follower;
        if (!check_walk(leader, inst.leader_starts[i], tag + " leader")) continue;
        if (!check_walk(follower, inst.follower_starts[i], tag + " follower")) continue;

        if (leader.finish_time() != m.time)
            issue(tag + " leader: finishes at t=" + std::to_string(leader.finish_time()) +
                  ", meeting is at t=" + std::to_string(m.time));
        else if (leader.cells.back() != m.loc)
            issue(tag + " leader: ends at " + cell_str(leader.cells.back()) + ", meeting is at " + cell_str(m.loc));
        bool picked_up = false;
        for (int t = 0; t <= leader.finish_time() && !picked_up; ++t)
            picked_up = leader.at(t) == inst.tasks[i].start;
        if (!picked_up) issue(tag + " leader: never visits the task start " + cell_str(inst.tasks[i].start));

        if (follower.finish_time() < m.time) {
            issue(tag + " follower: finishes at t=" + std::to_string(follower.finish_time()) +
                  " before the meeting at t=" + std::to_string(m.time));
        } else {
            if (follower.at(m.time) != m.loc)
                issue(tag + " follower: at " + cell_str(follower.at(m.time)) + " at the meeting time, not " +
                      cell_str(m.loc));
            if (follower.cells.back() != inst.tasks[i].goal)
                issue(tag + " follower: ends at " + cell_str(follower.cells.back()) + ", goal is " +
                      cell_str(inst.tasks[i].goal));
            for (int t = m.time + 1; t < follower.finish_time(); ++t)
                if (follower.at(t) == inst.tasks[i].goal) {
                    issue(tag + " follower: touches the goal at t=" + std::to_string(t) +
                          " but finishes later at t=" + std::to_string(follower.finish_time()));
                    break;
                }
        }
    }
    if (!issues.empty()) return issues;

    // Pairwise collision audit.
    const int agents = inst.num_agents();
    int horizon = 0;
    for (int a = 0; a < agents; ++a) horizon = std::max(horizon, solution.agent_path(a).finish_time());
    for (int t = 0; t <= horizon; ++t) {
        for (int a = 0; a < agents; ++a) {
            const Path& pa = solution.agent_path(a);
            if (!pa.active_at(t)) continue;
            for (int b = a + 1; b < agents; ++b) {
                const Path& pb = solution.agent_path(b);
                if (pb.active_at(t) && pa.at(t) == pb.at(t)) {
                    bool sanctioned = false;
                    if (Instance::task_of(a) == Instance::task_of(b)) {
                        const Meeting& m = meetings.meetings[static_cast<size_t>(Instance::task_of(a))];
                        sanctioned = pa.at(t) == m.loc && t == m.time;
                    }
                    if (!sanctioned)
                        issue("agents " + std::to_string(a) + " and " + std::to_string(b) + " collide at " +
                              cell_str(pa.at(t)) + " at t=" + std::to_string(t));
                }
                if (pa.active_at(t + 1) && pb.active_at(t) && pb.active_at(t + 1) &&
                    pa.at(t) == pb.at(t + 1) && pa.at(t + 1) == pb.at(t) && pa.at(t) != pa.at(t + 1))
                    issue("agents " + std::to_string(a) + " and " + std::to_string(b) + " swap across " +
                          cell_str(pa.at(t)) + " - " + cell_str(pa.at(t + 1)) + " at t=" + std::to_string(t));
            }
        }
    }
    return issues;
}

}  // namespace cocbs
