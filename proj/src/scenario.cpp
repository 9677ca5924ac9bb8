#include "scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace cocbs {

std::vector<ScenEntry> parse_scen(std::istream& in) {
    std::vector<ScenEntry> entries;
    std::string line;
    int line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            first = false;
            if (line.rfind("version", 0) == 0) continue;  // optional header
        }
        if (line.empty()) continue;
        std::istringstream iss(line);
        ScenEntry e;
        int sx, sy, gx, gy;
        if (!(iss >> e.bucket >> e.map_name >> e.map_width >> e.map_height >> sx >> sy >> gx >> gy >>
              e.optimal_length))
            throw ParseError("scen line " + std::to_string(line_no) + ": malformed entry '" + line + "'");
        e.start = Cell{sy, sx};
        e.goal = Cell{gy, gx};
        auto inside = [&](Cell c) {
            return c.row >= 0 && c.row < e.map_height && c.col >= 0 && c.col < e.map_width;
        };
        if (!inside(e.start) || !inside(e.goal))
            throw ParseError("scen line " + std::to_string(line_no) +
                             ": start/goal outside declared " + std::to_string(e.map_width) + "x" +
                             std::to_string(e.map_height) + " map");
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<ScenEntry> parse_scen(const std::string& text) {
    std::istringstream iss(text);
    return parse_scen(iss);
}

std::vector<ScenEntry> load_scen(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scen file '" + path + "'");
    return parse_scen(in);
}

void validate_instance(const Instance& inst) {
    size_t k = inst.tasks.size();
    if (inst.leader_starts.size() != k || inst.follower_starts.size() != k)
        throw InvalidInstance("instance has " + std::to_string(k) + " tasks but " +
                              std::to_string(inst.leader_starts.size()) + " leaders and " +
                              std::to_string(inst.follower_starts.size()) + " followers");
    auto check_cell = [&](Cell c, const std::string& what) {
        if (!inst.map.in_bounds(c))
            throw InvalidInstance(what + " (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                                  ") is out of bounds");
        if (inst.map.blocked(c))
            throw InvalidInstance(what + " (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                                  ") is a blocked cell");
    };
    for (size_t i = 0; i < k; ++i) {
        std::string ti = "task " + std::to_string(i);
        check_cell(inst.tasks[i].start, ti + " start");
        check_cell(inst.tasks[i].goal, ti + " goal");
        check_cell(inst.leader_starts[i], ti + " leader start");
        check_cell(inst.follower_starts[i], ti + " follower start");
    }
    std::set<Cell> seen;
    for (int a = 0; a < inst.num_agents(); ++a) {
        Cell c = inst.agent_start(a);
        if (!seen.insert(c).second)
            throw InvalidInstance("duplicate agent start cell (" + std::to_string(c.row) + "," +
                                  std::to_string(c.col) + ")");
    }
}

Instance build_instance(const GridMap& map, const std::vector<ScenEntry>& entries, int num_tasks) {
    if (num_tasks < 0) throw InvalidInstance("task count must be non-negative");
    size_t need = 2 * static_cast<size_t>(num_tasks);
    if (entries.size() < need)
        throw InvalidInstance("need " + std::to_string(need) + " scen entries for " +
                              std::to_string(num_tasks) + " tasks, have " + std::to_string(entries.size()));
    Instance inst;
    inst.map = map;
    for (int j = 0; j < num_tasks; ++j) {
        const ScenEntry& task_row = entries[2 * static_cast<size_t>(j)];
        const ScenEntry& agent_row = entries[2 * static_cast<size_t>(j) + 1];
        inst.tasks.push_back(Task{task_row.start, task_row.goal});
        inst.leader_starts.push_back(agent_row.start);
        inst.follower_starts.push_back(agent_row.goal);
    }
    validate_instance(inst);
    return inst;
}

namespace {

Cell cell_from_json(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError("instance json: " + what + " must be [row, col]");
    return Cell{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

Instance parse_instance_json(const std::string& text, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("instance json: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("instance json: top level must be an object");

    Instance inst;
    if (!j.contains("map")) throw ParseError("instance json: missing 'map'");
    const auto& m = j["map"];
    if (m.is_string()) {
        std::filesystem::path p = m.get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        inst.map = GridMap::load(p.string());
    } else if (m.is_array()) {
        std::ostringstream text_map;
        int width = -1;
        for (const auto& row : m) {
            if (!row.is_string()) throw ParseError("instance json: inline map rows must be strings");
            std::string s = row.get<std::string>();
            if (width < 0)
                width = static_cast<int>(s.size());
            else if (static_cast<int>(s.size()) != width)
                throw ParseError("instance json: inline map rows have unequal widths");
            text_map << s << '\n';
        }
        if (width <= 0 || m.empty()) throw ParseError("instance json: inline map is empty");
        std::ostringstream full;
        full << "type octile\nheight " << m.size() << "\nwidth " << width << "\nmap\n" << text_map.str();
        inst.map = GridMap::parse(full.str());
    } else {
        throw ParseError("instance json: 'map' must be a path string or an array of row strings");
    }

    for (const char* key : {"tasks", "leaders", "followers"})
        if (!j.contains(key) || !j[key].is_array())
            throw ParseError(std::string("instance json: missing array '") + key + "'");

    for (const auto& t : j["tasks"]) {
        if (!t.is_object() || !t.contains("start") || !t.contains("goal"))
            throw ParseError("instance json: each task needs 'start' and 'goal'");
        inst.tasks.push_back(Task{cell_from_json(t["start"], "task start"), cell_from_json(t["goal"], "task goal")});
    }
    for (const auto& c : j["leaders"]) inst.leader_starts.push_back(cell_from_json(c, "leader start"));
    for (const auto& c : j["followers"]) inst.follower_starts.push_back(cell_from_json(c, "follower start"));

    validate_instance(inst);
    return inst;
}

Instance load_instance_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace cocbs
