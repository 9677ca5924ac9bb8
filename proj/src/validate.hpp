#pragma once

#include <string>
#include <vector>

#include "meetings.hpp"
#include "scenario.hpp"
#include "search.hpp"

namespace cocbs {

// Post-hoc audit of a claimed solution, written as a direct transcript of
// the problem rules rather than reusing any solver machinery: per-path
// shape (starts, steps, traversability), hand-off semantics (pickup before
// the meeting, both agents at the meeting, delivery at first post-meeting
// goal arrival), and a full pairwise collision scan with the single
// sanctioned meeting-point co-location. Returns human-readable issues;
// empty means the solution is valid.
std::vector<std::string> validate_solution(const Instance& inst, const MeetingSet& meetings,
                                           const Solution& solution);

}  // namespace cocbs
