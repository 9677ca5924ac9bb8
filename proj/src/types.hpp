#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cocbs {

// Grid coordinates, row 0 at the top, col 0 at the left.
struct Cell {
    int row = 0;
    int col = 0;
    auto operator<=>(const Cell&) const = default;
};

// A rendezvous chosen by the solver: where and when a leader hands its
// payload to the follower.
struct Meeting {
    Cell loc;
    int time = 0;
    auto operator<=>(const Meeting&) const = default;
};

enum class ConstraintKind : uint8_t { Vertex, Edge };

// Prohibition imposed by a conflict split.
//   Vertex: agent may not occupy v at time t.
//   Edge:   agent may not move u -> v, departing u at time t (arriving v at t+1).
struct Constraint {
    int agent = 0;
    ConstraintKind kind = ConstraintKind::Vertex;
    Cell v;
    Cell u;  // edge origin; unused for vertex constraints
    int t = 0;
    bool operator==(const Constraint&) const = default;
};

// A detected collision between two agents' paths.
//   Vertex: both occupy v at `time`.
//   Edge:   they swap along an edge; agent_a moves u -> v departing at `time`.
struct Conflict {
    int agent_a = 0;
    int agent_b = 0;
    ConstraintKind kind = ConstraintKind::Vertex;
    Cell v;
    Cell u;  // agent_a's move origin; unused for vertex conflicts
    int time = 0;
    bool operator==(const Conflict&) const = default;
};

// Timed walk: cells[t] is the location at time step t. The agent exists for
// t in [0, finish_time()] and disappears afterwards.
struct Path {
    std::vector<Cell> cells;

    int finish_time() const { return static_cast<int>(cells.size()) - 1; }
    bool active_at(int t) const { return t >= 0 && t < static_cast<int>(cells.size()); }
    const Cell& at(int t) const { return cells[static_cast<size_t>(t)]; }
    bool operator==(const Path&) const = default;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInstance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file that could not be opened or read, as opposed to one with bad content.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cocbs
