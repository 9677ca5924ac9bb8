#include "meetings.hpp"

#include <algorithm>

namespace cocbs {

MeetingTable::MeetingTable(const Instance& inst, int task)
    : task_(task),
      from_task_start_(compute_distance_field(inst.map, inst.tasks[static_cast<size_t>(task)].start)),
      from_follower_start_(compute_distance_field(inst.map, inst.follower_starts[static_cast<size_t>(task)])),
      from_goal_(compute_distance_field(inst.map, inst.tasks[static_cast<size_t>(task)].goal)),
      leader_to_task_start_(from_task_start_.at(inst.leader_starts[static_cast<size_t>(task)])) {
    const GridMap& map = inst.map;
    for (int idx = 0; idx < map.size(); ++idx) {
        Cell v = map.cell(idx);
        if (!map.traversable(v)) continue;
        int t = earliest_time(v);
        if (t == kUnreachable) continue;
        int c = cost_at(v, t);
        if (c == kUnreachable) continue;
        heap_.push_back(Candidate{c, v, t});
    }
    std::make_heap(heap_.begin(), heap_.end(), std::greater<>());
}

int MeetingTable::earliest_time(Cell v) const {
    int via_leader = dist_plus(leader_to_task_start_, from_task_start_.at(v));
    int via_follower = from_follower_start_.at(v);
    if (via_leader == kUnreachable || via_follower == kUnreachable) return kUnreachable;
    return std::max(via_leader, via_follower);
}

int MeetingTable::cost_at(Cell v, int t) const {
    int t_e = earliest_time(v);
    if (t_e == kUnreachable || t < t_e) return kUnreachable;
    return dist_plus(2 * t, from_goal_.at(v));
}

int MeetingTable::initial_cost(Cell v) const {
    int t_e = earliest_time(v);
    if (t_e == kUnreachable) return kUnreachable;
    return cost_at(v, t_e);
}

Meeting MeetingTable::next_meeting() {
    if (heap_.empty()) throw UnsolvableError("task " + std::to_string(task_) + " has no feasible meeting");
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    Candidate top = heap_.back();
    heap_.back() = Candidate{top.cost + 2, top.loc, top.time + 1};
    std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    materialized_.push_back(Meeting{top.loc, top.time});
    materialized_cost_.push_back(top.cost);
    return materialized_.back();
}

const Meeting& MeetingTable::meeting_at(size_t pos) {
    while (materialized_.size() <= pos) next_meeting();
    return materialized_[pos];
}

int MeetingTable::cost_at_pos(size_t pos) {
    meeting_at(pos);
    return materialized_cost_[pos];
}

std::vector<MeetingTable> build_meeting_tables(const Instance& inst) {
    std::vector<MeetingTable> tables;
    tables.reserve(static_cast<size_t>(inst.num_tasks()));
    for (int i = 0; i < inst.num_tasks(); ++i) tables.emplace_back(inst, i);
    return tables;
}

MeetingSet initial_meeting_set(std::vector<MeetingTable>& tables) {
    MeetingSet set;
    for (auto& t : tables) {
        set.meetings.push_back(t.meeting_at(0));
        set.cost += t.cost_at_pos(0);
    }
    return set;
}

}  // namespace cocbs
