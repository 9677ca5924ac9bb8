#include "wellformed.hpp"

#include <algorithm>
#include <sstream>

namespace cocbs {

namespace {

std::string cell_str(Cell c) {
    return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

// Sorted component labels adjacent to (or containing) cell c.
std::vector<int> touching_components(const GridMap& map, const std::vector<int>& comp, Cell c,
                                     int64_t& visited) {
    std::vector<int> out;
    auto note = [&](Cell n) {
        ++visited;
        if (!map.traversable(n)) return;
        int label = comp[static_cast<size_t>(map.index(n))];
        if (label >= 0) out.push_back(label);
    };
    note(c);  // endpoints carry label -1, so this only matters for free cells
    for (const auto& m : GridMap::kMoves) note(Cell{c.row + m[0], c.col + m[1]});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool intersects(const std::vector<int>& a, const std::vector<int>& b) {
    for (int x : a)
        if (std::binary_search(b.begin(), b.end(), x)) return true;
    return false;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    for (int x : a)
        if (std::binary_search(b.begin(), b.end(), x)) out.push_back(x);
    return out;
}

bool adjacent_or_equal(Cell a, Cell b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col) <= 1;
}

}  // namespace

WellFormedReport is_well_formed(const Instance& inst) {
    WellFormedReport report;
    const GridMap& map = inst.map;
    const int k = inst.num_tasks();

    std::vector<uint8_t> endpoint(static_cast<size_t>(map.size()), 0);
    auto mark = [&](Cell c) { endpoint[static_cast<size_t>(map.index(c))] = 1; };
    for (int i = 0; i < k; ++i) {
        mark(inst.tasks[static_cast<size_t>(i)].start);
        mark(inst.tasks[static_cast<size_t>(i)].goal);
        mark(inst.leader_starts[static_cast<size_t>(i)]);
        mark(inst.follower_starts[static_cast<size_t>(i)]);
    }

    // Label connected components of the traversable non-endpoint subgraph.
    std::vector<int> comp(static_cast<size_t>(map.size()), -1);
    int next_label = 0;
    std::vector<int> queue;
    for (int idx = 0; idx < map.size(); ++idx) {
        ++report.cells_visited;
        if (!map.traversable(map.cell(idx)) || endpoint[static_cast<size_t>(idx)] || comp[static_cast<size_t>(idx)] >= 0)
            continue;
        comp[static_cast<size_t>(idx)] = next_label;
        queue.assign(1, idx);
        for (size_t head = 0; head < queue.size(); ++head) {
            Cell c = map.cell(queue[head]);
            for (const auto& m : GridMap::kMoves) {
                Cell n{c.row + m[0], c.col + m[1]};
                ++report.cells_visited;
                if (!map.traversable(n)) continue;
                int nidx = map.index(n);
                if (endpoint[static_cast<size_t>(nidx)] || comp[static_cast<size_t>(nidx)] >= 0) continue;
                comp[static_cast<size_t>(nidx)] = next_label;
                queue.push_back(nidx);
            }
        }
        ++next_label;
    }

    for (int i = 0; i < k; ++i) {
        Cell s = inst.tasks[static_cast<size_t>(i)].start;
        Cell g = inst.tasks[static_cast<size_t>(i)].goal;
        Cell leader = inst.leader_starts[static_cast<size_t>(i)];
        Cell follower = inst.follower_starts[static_cast<size_t>(i)];

        auto comps_s = touching_components(map, comp, s, report.cells_visited);
        auto comps_g = touching_components(map, comp, g, report.cells_visited);
        auto comps_f = touching_components(map, comp, follower, report.cells_visited);
        if (intersect(intersect(comps_s, comps_g), comps_f).empty()) {
            report.well_formed = false;
            report.failing_task = i;
            report.failing_condition = 1;
            report.message = "task " + std::to_string(i) + ": no meeting cell outside the endpoint set connects task start " +
                             cell_str(s) + ", goal " + cell_str(g) + ", and follower start " + cell_str(follower);
            return report;
        }

        auto comps_l = touching_components(map, comp, leader, report.cells_visited);
        bool leader_reaches = adjacent_or_equal(leader, s) || intersects(comps_l, comps_s);
        if (!leader_reaches) {
            report.well_formed = false;
            report.failing_task = i;
            report.failing_condition = 2;
            report.message = "task " + std::to_string(i) + ": leader start " + cell_str(leader) +
                             " cannot reach task start " + cell_str(s) + " avoiding other endpoints";
            return report;
        }
    }
    return report;
}

bool meeting_table_prefilter(const Instance& inst, std::vector<MeetingTable>& tables) {
    const GridMap& map = inst.map;
    std::vector<uint8_t> endpoint(static_cast<size_t>(map.size()), 0);
    for (int i = 0; i < inst.num_tasks(); ++i) {
        endpoint[static_cast<size_t>(map.index(inst.tasks[static_cast<size_t>(i)].start))] = 1;
        endpoint[static_cast<size_t>(map.index(inst.tasks[static_cast<size_t>(i)].goal))] = 1;
        endpoint[static_cast<size_t>(map.index(inst.leader_starts[static_cast<size_t>(i)]))] = 1;
        endpoint[static_cast<size_t>(map.index(inst.follower_starts[static_cast<size_t>(i)]))] = 1;
    }
    for (auto& table : tables) {
        bool found = false;
        for (int idx = 0; idx < map.size() && !found; ++idx) {
            if (endpoint[static_cast<size_t>(idx)] || !map.traversable(map.cell(idx))) continue;
            if (table.initial_cost(map.cell(idx)) != kUnreachable) found = true;
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace cocbs
