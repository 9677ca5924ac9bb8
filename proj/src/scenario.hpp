#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "grid_map.hpp"
#include "types.hpp"

namespace cocbs {

// One row of a MovingAI .scen file. The file stores x = column, y = row.
struct ScenEntry {
    int bucket = 0;
    std::string map_name;
    int map_width = 0;
    int map_height = 0;
    Cell start;
    Cell goal;
    double optimal_length = 0.0;  // informational only, ignored by the solver

    bool operator==(const ScenEntry&) const = default;
};

// Parses a .scen file ("version 1" header optional). Throws ParseError
// naming the offending line. Entries whose start/goal fall outside the
// declared dimensions are rejected.
std::vector<ScenEntry> parse_scen(std::istream& in);
std::vector<ScenEntry> parse_scen(const std::string& text);
std::vector<ScenEntry> load_scen(const std::string& path);

// One fetch-and-carry task: the leader picks the payload up at start, the
// follower delivers it to goal.
struct Task {
    Cell start;
    Cell goal;
    bool operator==(const Task&) const = default;
};

// A full problem: map, k tasks, and the pre-assigned leader/follower pair
// for each task. Agents are numbered globally: leader of task i is 2i,
// follower of task i is 2i+1.
struct Instance {
    GridMap map;
    std::vector<Task> tasks;
    std::vector<Cell> leader_starts;
    std::vector<Cell> follower_starts;

    int num_tasks() const { return static_cast<int>(tasks.size()); }
    int num_agents() const { return 2 * num_tasks(); }

    static int leader_of(int task) { return 2 * task; }
    static int follower_of(int task) { return 2 * task + 1; }
    static int task_of(int agent) { return agent / 2; }
    static bool is_leader(int agent) { return agent % 2 == 0; }

    Cell agent_start(int agent) const {
        int i = task_of(agent);
        return is_leader(agent) ? leader_starts[static_cast<size_t>(i)]
                                : follower_starts[static_cast<size_t>(i)];
    }
};

// Throws InvalidInstance unless: tasks/leaders/followers have equal length,
// every referenced cell is traversable, and all 2k agent start cells are
// pairwise distinct.
void validate_instance(const Instance& inst);

// Builds a k-task instance from the leading 2k scen entries. Entry 2j
// supplies task j (start, goal); entry 2j+1 supplies the agent pair
// (start field -> leader start, goal field -> follower start).
Instance build_instance(const GridMap& map, const std::vector<ScenEntry>& entries, int num_tasks);

// Native JSON instance format:
//   {"map": "relative/path.map" | ["....", ".@..", ...],
//    "tasks": [{"start": [r, c], "goal": [r, c]}, ...],
//    "leaders": [[r, c], ...], "followers": [[r, c], ...]}
// A string map is resolved relative to the JSON file's directory.
Instance load_instance_json(const std::string& path);
Instance parse_instance_json(const std::string& text, const std::string& base_dir);

}  // namespace cocbs
