#pragma once

#include <cstdint>
#include <string>

namespace cocbs_cli {

// Deterministic map text in MovingAI format. style "random" scatters
// obstacles uniformly at obstacle_rate; style "warehouse" lays out shelf
// blocks separated by aisles (obstacle_rate ignored).
std::string generate_map_text(const std::string& style, int width, int height,
                              double obstacle_rate, uint64_t seed);

// Deterministic scen text for the given map: `rows` entries whose start and
// goal cells are pairwise distinct and drawn from the map's largest
// connected free region, so any prefix yields mutually reachable agents.
// The last column records the straight BFS distance.
std::string generate_scen_text(const std::string& map_text, const std::string& map_name,
                               int rows, uint64_t seed);

}  // namespace cocbs_cli
