#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "types.hpp"

namespace cocbs {

// 4-connected grid with static obstacles, parsed from the MovingAI .map
// format. Row-major storage, row 0 at the top.
class GridMap {
public:
    GridMap() = default;
    GridMap(int height, int width, std::vector<uint8_t> blocked);

    // Parses the textual .map format: header lines "type octile",
    // "height H", "width W", "map", then H rows of W glyphs.
    // Glyphs '.' and 'G' are traversable, '@', 'O', 'T' are blocked.
    // Throws ParseError naming the offending line (and column) otherwise.
    static GridMap parse(std::istream& in);
    static GridMap parse(const std::string& text);
    static GridMap load(const std::string& path);

    // Canonical text form ('.' free, '@' blocked). parse(render()) yields
    // an identical map.
    std::string render() const;

    int height() const { return height_; }
    int width() const { return width_; }
    int size() const { return height_ * width_; }
    int free_count() const { return free_count_; }

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    bool blocked(Cell c) const { return blocked_[static_cast<size_t>(index(c))] != 0; }
    bool traversable(Cell c) const { return in_bounds(c) && !blocked(c); }

    int index(Cell c) const { return c.row * width_ + c.col; }
    Cell cell(int index) const { return Cell{index / width_, index % width_}; }

    // Moves in fixed order: up, down, left, right (then wait, where a planner
    // allows it). Keeping one order everywhere makes every search deterministic.
    static constexpr std::array<std::array<int, 2>, 4> kMoves = {{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

    // In-bounds traversable neighbors of c, in kMoves order.
    std::vector<Cell> neighbors(Cell c) const;

    bool operator==(const GridMap&) const = default;

private:
    int height_ = 0;
    int width_ = 0;
    int free_count_ = 0;
    std::vector<uint8_t> blocked_;  // row-major, 1 = obstacle
};

}  // namespace cocbs
