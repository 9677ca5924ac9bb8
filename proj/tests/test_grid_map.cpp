#include <doctest.h>

#include <sstream>

#include "grid_map.hpp"
#include "test_helpers.hpp"
#include "types.hpp"

using namespace cocbs;
using cocbs::testing::map_from_rows;
using cocbs::testing::map_text_from_rows;

TEST_CASE("parses the MovingAI header and glyph rows") {
    const GridMap map = GridMap::parse(
        "type octile\n"
        "height 2\n"
        "width 3\n"
        "map\n"
        ".@G\n"
        "TO.\n");
    CHECK(map.height() == 2);
    CHECK(map.width() == 3);
    CHECK(map.size() == 6);
    CHECK(map.traversable(Cell{0, 0}));
    CHECK(map.blocked(Cell{0, 1}));
    CHECK(map.traversable(Cell{0, 2}));  // G counts as ground
    CHECK(map.blocked(Cell{1, 0}));      // T = tree
    CHECK(map.blocked(Cell{1, 1}));      // O = out of bounds marker
    CHECK(map.traversable(Cell{1, 2}));
    CHECK(map.free_count() == 3);
}

TEST_CASE("accepts width before height and CRLF line endings") {
    const GridMap map = GridMap::parse("type octile\r\nwidth 2\r\nheight 1\r\nmap\r\n.@\r\n");
    CHECK(map.height() == 1);
    CHECK(map.width() == 2);
    CHECK(map.blocked(Cell{0, 1}));
}

TEST_CASE("rejects malformed map text with the offending location") {
    CHECK_THROWS_AS(GridMap::parse(""), ParseError);
    // missing "map" separator
    CHECK_THROWS_AS(GridMap::parse("type octile\nheight 1\nwidth 1\n.\n"), ParseError);
    // unknown glyph, position named in the message
    try {
        GridMap::parse("type octile\nheight 1\nwidth 3\nmap\n.x.\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string what = e.what();
        CHECK(what.find("5") != std::string::npos);  // line number
        CHECK(what.find("2") != std::string::npos);  // column number
    }
    // row shorter than the declared width
    CHECK_THROWS_AS(GridMap::parse("type octile\nheight 1\nwidth 3\nmap\n..\n"), ParseError);
    // fewer rows than declared
    CHECK_THROWS_AS(GridMap::parse("type octile\nheight 2\nwidth 2\nmap\n..\n"), ParseError);
    // non-numeric dimension
    CHECK_THROWS_AS(GridMap::parse("type octile\nheight x\nwidth 2\nmap\n..\n"), ParseError);
}

TEST_CASE("render emits the canonical form and round-trips") {
    const GridMap map = GridMap::parse("type octile\nheight 2\nwidth 2\nmap\n.G\n@T\n");
    CHECK(map.render() == "type octile\nheight 2\nwidth 2\nmap\n..\n@@\n");
    CHECK(GridMap::parse(map.render()) == map);
}

TEST_CASE("neighbors come back in up, down, left, right order") {
    const GridMap map = map_from_rows({"...", ".@.", "..."});
    CHECK(map.neighbors(Cell{1, 0}) ==
          std::vector<Cell>{Cell{0, 0}, Cell{2, 0}});  // right neighbor (1,1) is blocked
    CHECK(map.neighbors(Cell{0, 1}) == std::vector<Cell>{Cell{0, 0}, Cell{0, 2}});
    CHECK(map.neighbors(Cell{2, 1}) == std::vector<Cell>{Cell{2, 0}, Cell{2, 2}});
    CHECK(map.neighbors(Cell{0, 0}) == std::vector<Cell>{Cell{1, 0}, Cell{0, 1}});
}

TEST_CASE("index and cell are inverse row-major maps") {
    const GridMap map = map_from_rows({"....", "....", "...."});
    for (int idx = 0; idx < map.size(); ++idx) CHECK(map.index(map.cell(idx)) == idx);
    CHECK(map.index(Cell{2, 3}) == 11);
    CHECK(map.cell(5) == Cell{1, 1});
}

TEST_CASE("in_bounds rejects coordinates off every edge") {
    const GridMap map = map_from_rows({"..", ".."});
    CHECK(map.in_bounds(Cell{0, 0}));
    CHECK(map.in_bounds(Cell{1, 1}));
    CHECK_FALSE(map.in_bounds(Cell{-1, 0}));
    CHECK_FALSE(map.in_bounds(Cell{0, -1}));
    CHECK_FALSE(map.in_bounds(Cell{2, 0}));
    CHECK_FALSE(map.in_bounds(Cell{0, 2}));
    CHECK_FALSE(map.traversable(Cell{-1, -1}));
}

TEST_CASE("stream and string parsing agree") {
    const std::string text = map_text_from_rows({"..@", "@.."});
    std::istringstream in(text);
    CHECK(GridMap::parse(in) == GridMap::parse(text));
}
