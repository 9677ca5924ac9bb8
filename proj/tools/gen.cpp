#include "gen.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cocbs_cli {

namespace {

struct CharGrid {
    int width = 0;
    int height = 0;
    std::vector<std::string> rows;

    bool free_at(int r, int c) const {
        return r >= 0 && r < height && c >= 0 && c < width &&
               (rows[static_cast<size_t>(r)][static_cast<size_t>(c)] == '.' ||
                rows[static_cast<size_t>(r)][static_cast<size_t>(c)] == 'G');
    }
};

CharGrid parse_grid(const std::string& map_text) {
    std::istringstream in(map_text);
    CharGrid g;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("height", 0) == 0) g.height = std::stoi(line.substr(7));
        else if (line.rfind("width", 0) == 0) g.width = std::stoi(line.substr(6));
        else if (line == "map") break;
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) g.rows.push_back(line);
    }
    if (g.width <= 0 || g.height <= 0 || static_cast<int>(g.rows.size()) != g.height)
        throw std::runtime_error("malformed map text");
    return g;
}

std::string wrap_map(int width, int height, const std::vector<std::string>& rows) {
    std::ostringstream out;
    out << "type octile\nheight " << height << "\nwidth " << width << "\nmap\n";
    for (const auto& r : rows) out << r << "\n";
    return out.str();
}

std::vector<int> bfs_grid(const CharGrid& g, int start_r, int start_c) {
    std::vector<int> dist(static_cast<size_t>(g.width * g.height), -1);
    std::vector<int> queue{start_r * g.width + start_c};
    dist[static_cast<size_t>(queue[0])] = 0;
    static const int dr[4] = {-1, 1, 0, 0};
    static const int dc[4] = {0, 0, -1, 1};
    for (size_t head = 0; head < queue.size(); ++head) {
        int r = queue[head] / g.width, c = queue[head] % g.width;
        for (int d = 0; d < 4; ++d) {
            int nr = r + dr[d], nc = c + dc[d];
            if (!g.free_at(nr, nc)) continue;
            int nidx = nr * g.width + nc;
            if (dist[static_cast<size_t>(nidx)] != -1) continue;
            dist[static_cast<size_t>(nidx)] = dist[static_cast<size_t>(queue[head])] + 1;
            queue.push_back(nidx);
        }
    }
    return dist;
}

}  // namespace

std::string generate_map_text(const std::string& style, int width, int height,
                              double obstacle_rate, uint64_t seed) {
    if (width <= 0 || height <= 0) throw std::runtime_error("map dimensions must be positive");
    std::vector<std::string> rows(static_cast<size_t>(height), std::string(static_cast<size_t>(width), '.'));
    if (style == "random") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c)
                if (coin(rng) < obstacle_rate) rows[static_cast<size_t>(r)][static_cast<size_t>(c)] = '@';
    } else if (style == "warehouse") {
        // Shelf blocks (8 wide, 2 tall) on an aisle lattice: every third row
        // and every ninth column stay clear, as does a two-cell border.
        for (int r = 2; r < height - 2; ++r) {
            if ((r - 2) % 3 == 2) continue;  // aisle row
            for (int c = 2; c < width - 2; ++c) {
                if ((c - 2) % 9 == 8) continue;  // aisle column
                rows[static_cast<size_t>(r)][static_cast<size_t>(c)] = '@';
            }
        }
    } else {
        throw std::runtime_error("unknown map style '" + style + "'");
    }
    return wrap_map(width, height, rows);
}

std::string generate_scen_text(const std::string& map_text, const std::string& map_name,
                               int rows, uint64_t seed) {
    CharGrid g = parse_grid(map_text);

    // Largest connected free region.
    std::vector<int> comp(static_cast<size_t>(g.width * g.height), -1);
    int labels = 0, best_label = -1, best_size = 0;
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            if (!g.free_at(r, c) || comp[static_cast<size_t>(r * g.width + c)] != -1) continue;
            std::vector<int> dist = bfs_grid(g, r, c);
            int size = 0;
            for (int idx = 0; idx < g.width * g.height; ++idx)
                if (dist[static_cast<size_t>(idx)] != -1 && comp[static_cast<size_t>(idx)] == -1) {
                    comp[static_cast<size_t>(idx)] = labels;
                    ++size;
                }
            if (size > best_size) {
                best_size = size;
                best_label = labels;
            }
            ++labels;
        }
    }
    std::vector<int> cells;
    for (int idx = 0; idx < g.width * g.height; ++idx)
        if (comp[static_cast<size_t>(idx)] == best_label) cells.push_back(idx);
    if (static_cast<int>(cells.size()) < 2 * rows)
        throw std::runtime_error("map's largest free region has " + std::to_string(cells.size()) +
                                 " cells, need " + std::to_string(2 * rows));

    std::mt19937_64 rng(seed);
    std::shuffle(cells.begin(), cells.end(), rng);

    std::ostringstream out;
    out << "version 1\n";
    for (int i = 0; i < rows; ++i) {
        int s = cells[static_cast<size_t>(2 * i)];
        int t = cells[static_cast<size_t>(2 * i + 1)];
        int sr = s / g.width, sc = s % g.width;
        int tr = t / g.width, tc = t % g.width;
        std::vector<int> dist = bfs_grid(g, sr, sc);
        out << 0 << '\t' << map_name << '\t' << g.width << '\t' << g.height << '\t'
            << sc << '\t' << sr << '\t' << tc << '\t' << tr << '\t'
            << dist[static_cast<size_t>(t)] << ".0\n";
    }
    return out.str();
}

}  // namespace cocbs_cli
