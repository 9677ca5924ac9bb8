#include "grid_map.hpp"

#include <fstream>
#include <sstream>

namespace cocbs {

GridMap::GridMap(int height, int width, std::vector<uint8_t> blocked)
    : height_(height), width_(width), blocked_(std::move(blocked)) {
    if (height_ <= 0 || width_ <= 0) throw ParseError("map dimensions must be positive");
    if (blocked_.size() != static_cast<size_t>(height_) * static_cast<size_t>(width_))
        throw ParseError("map cell count does not match dimensions");
    free_count_ = 0;
    for (uint8_t b : blocked_)
        if (!b) ++free_count_;
}

namespace {

// Strips a trailing '\r' so files with Windows line endings parse cleanly.
std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

GridMap GridMap::parse(std::istream& in) {
    std::string line;
    int line_no = 0;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(std::string("unexpected end of map file, expected ") + what);
        ++line_no;
        line = chomp(line);
    };

    next_line("'type' header");
    {
        std::istringstream iss(line);
        std::string key, value;
        if (!(iss >> key >> value) || key != "type")
            throw ParseError("map line 1: expected 'type octile', got '" + line + "'");
        if (value != "octile")
            throw ParseError("map line 1: unsupported map type '" + value + "'");
    }

    // height and width, accepted in either order.
    int height = -1, width = -1;
    for (int i = 0; i < 2; ++i) {
        next_line("'height'/'width' header");
        std::istringstream iss(line);
        std::string key;
        int value = 0;
        if (!(iss >> key >> value))
            throw ParseError("map line " + std::to_string(line_no) + ": malformed header '" + line + "'");
        if (key == "height")
            height = value;
        else if (key == "width")
            width = value;
        else
            throw ParseError("map line " + std::to_string(line_no) + ": unexpected header '" + key + "'");
    }
    if (height <= 0 || width <= 0)
        throw ParseError("map header: dimensions must be positive, got height " + std::to_string(height) +
                         ", width " + std::to_string(width));

    next_line("'map' header");
    if (line != "map") throw ParseError("map line " + std::to_string(line_no) + ": expected 'map', got '" + line + "'");

    std::vector<uint8_t> blocked;
    blocked.reserve(static_cast<size_t>(height) * static_cast<size_t>(width));
    for (int r = 0; r < height; ++r) {
        next_line("map row");
        if (static_cast<int>(line.size()) != width)
            throw ParseError("map line " + std::to_string(line_no) + ": row has " + std::to_string(line.size()) +
                             " cells, expected " + std::to_string(width));
        for (int c = 0; c < width; ++c) {
            char g = line[static_cast<size_t>(c)];
            if (g == '.' || g == 'G')
                blocked.push_back(0);
            else if (g == '@' || g == 'O' || g == 'T')
                blocked.push_back(1);
            else
                throw ParseError("map line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                 ": unknown glyph '" + std::string(1, g) + "'");
        }
    }
    return GridMap(height, width, std::move(blocked));
}

GridMap GridMap::parse(const std::string& text) {
    std::istringstream iss(text);
    return parse(iss);
}

GridMap GridMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open map file '" + path + "'");
    return parse(in);
}

std::string GridMap::render() const {
    std::ostringstream out;
    out << "type octile\n"
        << "height " << height_ << "\n"
        << "width " << width_ << "\n"
        << "map\n";
    for (int r = 0; r < height_; ++r) {
        for (int c = 0; c < width_; ++c) out << (blocked(Cell{r, c}) ? '@' : '.');
        out << '\n';
    }
    return out.str();
}

std::vector<Cell> GridMap::neighbors(Cell c) const {
    std::vector<Cell> out;
    out.reserve(4);
    for (const auto& m : kMoves) {
        Cell n{c.row + m[0], c.col + m[1]};
        if (traversable(n)) out.push_back(n);
    }
    return out;
}

}  // namespace cocbs
