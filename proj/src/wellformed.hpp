#pragma once

#include <string>

#include "meetings.hpp"
#include "scenario.hpp"

namespace cocbs {

struct WellFormedReport {
    bool well_formed = true;
    int failing_task = -1;
    // 1: no cell outside the endpoint set is connected (through non-endpoint
    //    interiors) to the task start, the goal, and the follower start.
    // 2: the leader cannot reach the task start through non-endpoint interiors.
    int failing_condition = 0;
    std::string message;
    int64_t cells_visited = 0;  // labeling + adjacency work, for scaling tests
};

// Structural solvability check. Endpoints are all agent start cells plus all
// task starts and goals. The instance is well formed when, for every task:
//   (1) some non-endpoint cell reaches the task start, the goal, and the
//       follower start via paths whose interior avoids endpoints, and
//   (2) the leader reaches the task start the same way.
// Runs in O(|V| + k) using one component labeling of the non-endpoint
// subgraph. Reports the lowest-index failing task, condition 1 before 2.
WellFormedReport is_well_formed(const Instance& inst);

// Cheap necessary-but-not-sufficient screen: every task has some non-endpoint
// cell with a finite meeting cost. Implied by well-formedness, but can pass
// on instances the full check rejects (meeting-table distances may run
// through endpoint cells, which condition (1) forbids as interiors).
bool meeting_table_prefilter(const Instance& inst, std::vector<MeetingTable>& tables);

}  // namespace cocbs
