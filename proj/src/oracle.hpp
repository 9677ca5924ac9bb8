#pragma once

#include <cstdint>
#include <vector>

#include "scenario.hpp"
#include "types.hpp"

namespace cocbs {

struct OracleOptions {
    int cost_bound = 0;                    // inclusive sum-of-costs ceiling
    int64_t max_expansions = 20'000'000;   // joint-state guard for the whole call
};

enum class OracleStatus {
    Optimal,            // cost is the global minimum within the bound
    BoundExhausted,     // no solution with sum-of-costs <= cost_bound
    ResourceExhausted,  // gave up before the search space was covered
};

struct OracleResult {
    OracleStatus status = OracleStatus::BoundExhausted;
    int cost = -1;
    std::vector<Meeting> meetings;  // per task, when Optimal
    std::vector<Path> paths;        // per agent (leader 2i, follower 2i+1), when Optimal
};

// Exhaustive reference solver, independent of the main search: enumerates
// every meeting assignment whose summed hand-off cost fits the bound (all
// cells, all times) in non-decreasing cost order, and runs a joint-state
// A* over all agents for each assignment, keeping the best solution found.
// Shares only the map/instance types and the neighbor relation with the
// solver under test. Intended for small instances.
OracleResult solve_exhaustive(const Instance& inst, const OracleOptions& options);

}  // namespace cocbs
