// Tests for the command-line layer: the map/scenario generators, the
// benchmark harness with its CSV/JSON/report writers, and an exit-code smoke
// of the installed binary. The generators and the harness are linked in
// directly; the binary is exercised through std::system.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "bench.hpp"
#include "gen.hpp"

namespace {

const std::string kDataDir = COCBS_DATA_DIR;

std::filesystem::path scratch_dir() {
    const std::filesystem::path dir = std::filesystem::temp_directory_path() / "cocbs-cli-tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.push_back("");
    return fields;
}

// The 6x6 obstacle-free map and the six-row scenario used by the harness
// tests. Everything downstream is deterministic in these two seeds.
std::string open_map_text() { return cocbs_cli::generate_map_text("random", 6, 6, 0.0, 1); }

std::string open_scen_text() { return cocbs_cli::generate_scen_text(open_map_text(), "open_6x6.map", 6, 2); }

struct OpenFixture {
    std::filesystem::path map_path;
    std::filesystem::path scen_path;
};

OpenFixture write_open_fixture() {
    OpenFixture f;
    f.map_path = scratch_dir() / "open_6x6.map";
    f.scen_path = scratch_dir() / "open_6x6.scen";
    write_file(f.map_path, open_map_text());
    write_file(f.scen_path, open_scen_text());
    return f;
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CommandResult run_cli(const std::string& args) {
    const std::filesystem::path out_path = scratch_dir() / "cmd_stdout.txt";
    const std::filesystem::path err_path = scratch_dir() / "cmd_stderr.txt";
    const std::string cmd = std::string(COCBS_CLI_BIN) + " " + args + " > " + out_path.string() +
                            " 2> " + err_path.string();
    const int raw = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

}  // namespace

TEST_CASE("variant names map onto solver flags") {
    int pc = -1, le = -1;
    CHECK(cocbs_cli::parse_variant("basic", pc, le));
    CHECK(pc == 0);
    CHECK(le == 0);
    CHECK(cocbs_cli::parse_variant("pc", pc, le));
    CHECK(pc == 1);
    CHECK(le == 0);
    CHECK(cocbs_cli::parse_variant("pc-le", pc, le));
    CHECK(pc == 1);
    CHECK(le == 1);

    for (const std::string bad : {"", "PC", "le", "pcle", "pc-le "}) {
        pc = -1;
        le = -1;
        CHECK_FALSE(cocbs_cli::parse_variant(bad, pc, le));
        // Unknown names must leave the flags untouched.
        CHECK(pc == -1);
        CHECK(le == -1);
    }
}

TEST_CASE("random maps are deterministic in the seed") {
    const std::string text = cocbs_cli::generate_map_text("random", 8, 6, 0.25, 42);
    CHECK(text == cocbs_cli::generate_map_text("random", 8, 6, 0.25, 42));
    CHECK(text != cocbs_cli::generate_map_text("random", 8, 6, 0.25, 43));

    const std::vector<std::string> lines = lines_of(text);
    REQUIRE(lines.size() == 4 + 6);
    CHECK(lines[0] == "type octile");
    CHECK(lines[1] == "height 6");
    CHECK(lines[2] == "width 8");
    CHECK(lines[3] == "map");
    for (size_t i = 4; i < lines.size(); ++i) {
        CHECK(lines[i].size() == 8);
        for (char c : lines[i]) CHECK((c == '.' || c == '@'));
    }
}

TEST_CASE("obstacle rate bounds pin the map contents") {
    const std::vector<std::string> free_rows = lines_of(cocbs_cli::generate_map_text("random", 5, 4, 0.0, 9));
    for (size_t i = 4; i < free_rows.size(); ++i) CHECK(free_rows[i] == ".....");

    // The obstacle coin is drawn from [0, 1), so rate 1.0 always lands.
    const std::vector<std::string> full_rows = lines_of(cocbs_cli::generate_map_text("random", 5, 4, 1.0, 9));
    for (size_t i = 4; i < full_rows.size(); ++i) CHECK(full_rows[i] == "@@@@@");
}

TEST_CASE("warehouse maps have clear borders and aisles") {
    const std::string text = cocbs_cli::generate_map_text("warehouse", 30, 15, 0.7, 3);
    // Style "warehouse" ignores both the rate and the seed.
    CHECK(text == cocbs_cli::generate_map_text("warehouse", 30, 15, 0.0, 99));

    const std::vector<std::string> lines = lines_of(text);
    REQUIRE(lines.size() == 4 + 15);
    const auto cell = [&](int r, int c) { return lines[static_cast<size_t>(4 + r)][static_cast<size_t>(c)]; };
    for (int r = 0; r < 15; ++r) {
        for (int c = 0; c < 30; ++c) {
            const bool border = r < 2 || r >= 13 || c < 2 || c >= 28;
            const bool aisle_row = !border && (r - 2) % 3 == 2;
            const bool aisle_col = !border && (c - 2) % 9 == 8;
            const char expected = (border || aisle_row || aisle_col) ? '.' : '@';
            CHECK(cell(r, c) == expected);
        }
    }
}

TEST_CASE("invalid generator arguments are rejected") {
    CHECK_THROWS_WITH_AS(cocbs_cli::generate_map_text("maze", 8, 8, 0.2, 1),
                         doctest::Contains("unknown map style 'maze'"), std::runtime_error);
    CHECK_THROWS_WITH_AS(cocbs_cli::generate_map_text("random", 0, 8, 0.2, 1),
                         doctest::Contains("dimensions must be positive"), std::runtime_error);
    CHECK_THROWS_WITH_AS(cocbs_cli::generate_map_text("random", 8, -3, 0.2, 1),
                         doctest::Contains("dimensions must be positive"), std::runtime_error);
    CHECK_THROWS_WITH_AS(cocbs_cli::generate_scen_text("not a map", "x.map", 1, 1),
                         doctest::Contains("malformed map text"), std::runtime_error);
}

TEST_CASE("scen rows sample distinct cells from the largest free region") {
    // Two free regions: a 5x3 block on the left (15 cells) and a single
    // column on the right (3 cells). Only the left one may be sampled.
    const std::string map_text =
        "type octile\n"
        "height 3\n"
        "width 7\n"
        "map\n"
        ".....@.\n"
        ".....@.\n"
        ".....@.\n";

    const std::string scen = cocbs_cli::generate_scen_text(map_text, "split.map", 5, 7);
    CHECK(scen == cocbs_cli::generate_scen_text(map_text, "split.map", 5, 7));
    CHECK(scen != cocbs_cli::generate_scen_text(map_text, "split.map", 5, 8));

    const std::vector<std::string> lines = lines_of(scen);
    REQUIRE(lines.size() == 1 + 5);
    CHECK(lines[0] == "version 1");

    std::set<std::pair<int, int>> used;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_fields(lines[i], '\t');
        REQUIRE(f.size() == 9);
        CHECK(f[0] == "0");
        CHECK(f[1] == "split.map");
        CHECK(f[2] == "7");
        CHECK(f[3] == "3");
        const int sx = std::stoi(f[4]), sy = std::stoi(f[5]);
        const int tx = std::stoi(f[6]), ty = std::stoi(f[7]);
        for (int x : {sx, tx}) {
            CHECK(x >= 0);
            CHECK(x <= 4);  // never the 3-cell region behind the wall
        }
        for (int y : {sy, ty}) {
            CHECK(y >= 0);
            CHECK(y <= 2);
        }
        CHECK(used.insert({sx, sy}).second);
        CHECK(used.insert({tx, ty}).second);
        // The left region is an unobstructed rectangle, so the recorded BFS
        // distance is the Manhattan distance.
        const int manhattan = std::abs(sx - tx) + std::abs(sy - ty);
        CHECK(f[8] == std::to_string(manhattan) + ".0");
    }

    CHECK_THROWS_WITH_AS(cocbs_cli::generate_scen_text(map_text, "split.map", 8, 7),
                         doctest::Contains("15 cells, need 16"), std::runtime_error);
}

TEST_CASE("benchmark runs record accepted pairs and list rejections") {
    const OpenFixture f = write_open_fixture();

    cocbs_cli::BenchConfig config;
    config.map_path = f.map_path.string();
    config.scen_paths = {f.scen_path.string()};
    config.task_counts = {1, 2, 3, 4};
    config.variants = {"basic", "pc", "pc-le"};
    config.timeout_ms = 10000;
    config.seed = 5;

    const cocbs_cli::BenchOutput out = cocbs_cli::run_benchmark(config);

    // k=1 and k=2 pass the structural gate; k=3 fails it on its second task
    // and k=4 asks for more scen rows than exist. Rejected pairs get no rows.
    REQUIRE(out.records.size() == 6);
    REQUIRE(out.rejected.size() == 2);
    CHECK(out.rejected[0].rfind("open_6x6.scen k=3: task 1", 0) == 0);
    CHECK(out.rejected[1] == "open_6x6.scen k=4: need 8 scen entries for 4 tasks, have 6");

    const std::vector<std::string> variant_order = {"basic", "pc", "pc-le"};
    for (size_t i = 0; i < out.records.size(); ++i) {
        const cocbs_cli::RunRecord& r = out.records[i];
        CHECK(r.map_name == "open_6x6.map");
        CHECK(r.scen_name == "open_6x6.scen");
        CHECK(r.k == (i < 3 ? 1 : 2));
        CHECK(r.variant == variant_order[i % 3]);
        CHECK(r.solved);
        CHECK(r.soc == (r.k == 1 ? 8 : 26));
        CHECK(r.meeting_sets == 1);
        CHECK(r.first_set_solved);
        CHECK(r.roots_expanded == 0);
        CHECK(r.regulars_expanded == 0);
        CHECK(r.planner_calls == 2 * r.k);
        CHECK(r.time_ms >= 0.0);
    }
}

TEST_CASE("benchmark CSV is deterministic apart from the timing column") {
    const OpenFixture f = write_open_fixture();

    cocbs_cli::BenchConfig config;
    config.map_path = f.map_path.string();
    config.scen_paths = {f.scen_path.string()};
    config.task_counts = {1, 2};
    config.variants = {"pc", "pc-le"};
    config.timeout_ms = 10000;
    config.seed = 11;

    const std::string csv_a = cocbs_cli::to_csv(config, cocbs_cli::run_benchmark(config));
    const std::string csv_b = cocbs_cli::to_csv(config, cocbs_cli::run_benchmark(config));

    const auto strip_time = [](const std::string& csv) {
        std::string stripped;
        const std::vector<std::string> lines = lines_of(csv);
        for (size_t i = 0; i < lines.size(); ++i) {
            if (i < 2) {
                stripped += lines[i] + "\n";
                continue;
            }
            std::vector<std::string> fields = split_fields(lines[i], ',');
            REQUIRE(fields.size() == 12);
            fields[6] = "-";
            for (size_t j = 0; j < fields.size(); ++j) stripped += (j ? "," : "") + fields[j];
            stripped += "\n";
        }
        return stripped;
    };
    CHECK(strip_time(csv_a) == strip_time(csv_b));

    const std::vector<std::string> lines = lines_of(csv_a);
    REQUIRE(lines.size() == 2 + 4);
    CHECK(lines[0] == "# map=open_6x6.map seed=11 timeout_ms=10000");
    CHECK(lines[1] ==
          "map,scen,k,variant,solved,soc,time_ms,meeting_sets,first_set_solved,roots_expanded,"
          "regulars_expanded,planner_calls");
    CHECK(lines[2].rfind("open_6x6.map,open_6x6.scen,1,pc,1,8,", 0) == 0);
    CHECK(lines[3].rfind("open_6x6.map,open_6x6.scen,1,pc-le,1,8,", 0) == 0);
    CHECK(lines[4].rfind("open_6x6.map,open_6x6.scen,2,pc,1,26,", 0) == 0);
    CHECK(lines[5].rfind("open_6x6.map,open_6x6.scen,2,pc-le,1,26,", 0) == 0);
    for (size_t i = 2; i < lines.size(); ++i) {
        const std::vector<std::string> fields = split_fields(lines[i], ',');
        REQUIRE(fields.size() == 12);
        CHECK(fields[7] == "1");   // meeting_sets
        CHECK(fields[8] == "1");   // first_set_solved
        CHECK(fields[9] == "0");   // roots_expanded
        CHECK(fields[10] == "0");  // regulars_expanded
    }
}

TEST_CASE("unsolved runs leave the cost column blank") {
    const OpenFixture f = write_open_fixture();

    cocbs_cli::BenchConfig config;
    config.map_path = f.map_path.string();
    config.scen_paths = {f.scen_path.string()};
    config.task_counts = {1};
    config.variants = {"pc-le"};
    config.timeout_ms = 0;  // expires before the first node pop

    const cocbs_cli::BenchOutput out = cocbs_cli::run_benchmark(config);
    REQUIRE(out.records.size() == 1);
    CHECK_FALSE(out.records[0].solved);
    CHECK(out.rejected.empty());  // the structural gate is not time-limited

    const std::vector<std::string> lines = lines_of(cocbs_cli::to_csv(config, out));
    REQUIRE(lines.size() == 3);
    const std::vector<std::string> fields = split_fields(lines[2], ',');
    REQUIRE(fields.size() == 12);
    CHECK(fields[4] == "0");
    CHECK(fields[5] == "");

    const std::string report = cocbs_cli::aggregate_report(out);
    CHECK(report.find("k=1 variant=pc-le: solved 0/1 (0.0%)") != std::string::npos);
}

TEST_CASE("aggregate report and JSON document summarise the same groups") {
    const OpenFixture f = write_open_fixture();

    cocbs_cli::BenchConfig config;
    config.map_path = f.map_path.string();
    config.scen_paths = {f.scen_path.string()};
    config.task_counts = {1, 2, 3};
    config.variants = {"basic", "pc", "pc-le"};
    config.timeout_ms = 10000;
    config.seed = 21;

    const cocbs_cli::BenchOutput out = cocbs_cli::run_benchmark(config);

    const std::string report = cocbs_cli::aggregate_report(out);
    for (const std::string needle : {
             "k=1 variant=basic: solved 1/1 (100.0%), mean meeting sets (solved) 1.00, first-set ratio 1.00",
             "k=1 variant=pc: solved 1/1 (100.0%)",
             "k=2 variant=pc-le: solved 1/1 (100.0%)",
             "rejected: 1",
             "open_6x6.scen k=3: task 1",
         })
        CHECK(report.find(needle) != std::string::npos);

    const nlohmann::json doc = nlohmann::json::parse(cocbs_cli::to_json(config, out));
    CHECK(doc["config"]["map"] == "open_6x6.map");
    CHECK(doc["config"]["seed"] == 21);
    CHECK(doc["config"]["timeout_ms"] == 10000);

    REQUIRE(doc["rows"].size() == 6);
    for (const auto& row : doc["rows"]) {
        CHECK(row["map"] == "open_6x6.map");
        CHECK(row["solved"] == 1);
        CHECK(row["soc"] == (row["k"] == 1 ? 8 : 26));
        CHECK(row["first_set_solved"] == 1);
        CHECK(row["meeting_sets"] == 1);
    }

    const auto& groups = doc["aggregates"]["groups"];
    REQUIRE(groups.size() == 6);  // two accepted task counts x three variants
    for (const auto& g : groups) {
        CHECK(g["attempted"] == 1);
        CHECK(g["solved"] == 1);
        CHECK(g["success_rate"] == 1.0);
        CHECK(g["mean_meeting_sets_solved"] == 1.0);
        CHECK(g["first_set_ratio"] == 1.0);
    }
    REQUIRE(doc["aggregates"]["rejected"].size() == 1);
    const std::string rejected = doc["aggregates"]["rejected"][0];
    CHECK(rejected.rfind("open_6x6.scen k=3: task 1", 0) == 0);
}

TEST_CASE("solve subcommand exit codes distinguish outcomes") {
    const std::string well = kDataDir + "/instances/well_formed_3x3.json";
    const std::string not_well = kDataDir + "/instances/not_well_formed_3x3.json";

    CommandResult r = run_cli("solve --instance " + well);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"status\": \"solved\"") != std::string::npos);
    CHECK(r.out.find("\"cost\": 9") != std::string::npos);

    r = run_cli("solve --instance " + not_well);
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("\"status\": \"not-well-formed\"") != std::string::npos);

    r = run_cli("solve --instance " + not_well + " --skip-well-formed-check");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"status\": \"solved\"") != std::string::npos);

    r = run_cli("solve --instance " + well + " --timeout-ms 0");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("\"status\": \"timeout\"") != std::string::npos);
}

TEST_CASE("check-only mode reports the verdict without solving") {
    const std::string well = kDataDir + "/instances/well_formed_3x3.json";
    const std::string demo_map = kDataDir + "/maps/demo_4x4.map";
    const std::string demo_scen = kDataDir + "/scen/demo_4x4.scen";

    CommandResult r = run_cli("solve --check-well-formed-only --instance " + well);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"well_formed\": true") != std::string::npos);

    r = run_cli("solve --check-well-formed-only --map " + demo_map + " --scen " + demo_scen +
                " --tasks 2");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("\"well_formed\": false") != std::string::npos);
    CHECK(r.out.find("task 0") != std::string::npos);

    // The same pair solves once the gate is bypassed.
    r = run_cli("solve --map " + demo_map + " --scen " + demo_scen +
                " --tasks 2 --skip-well-formed-check");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"cost\": 14") != std::string::npos);
}

TEST_CASE("bad solve invocations exit with an error") {
    const std::string well = kDataDir + "/instances/well_formed_3x3.json";

    CommandResult r = run_cli("");
    CHECK(r.exit_code != 0);

    r = run_cli("solve");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("need --instance") != std::string::npos);

    r = run_cli("solve --instance " + scratch_dir().string() + "/does_not_exist.json");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("io-error") != std::string::npos);

    r = run_cli("solve --instance " + well + " --variant bogus");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown variant 'bogus'") != std::string::npos);

    r = run_cli("solve --instance " + well + " --map " + kDataDir + "/maps/demo_4x4.map");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("--instance excludes") != std::string::npos);
}

TEST_CASE("generator subcommands write the library output verbatim") {
    const std::filesystem::path map_path = scratch_dir() / "smoke.map";
    const std::filesystem::path scen_path = scratch_dir() / "smoke.scen";
    std::filesystem::remove(map_path);
    std::filesystem::remove(scen_path);

    CommandResult r = run_cli("gen-map --style random --width 9 --height 7 --obstacle-rate 0.1 "
                              "--seed 13 --out " + map_path.string());
    CHECK(r.exit_code == 0);
    CHECK(read_file(map_path) == cocbs_cli::generate_map_text("random", 9, 7, 0.1, 13));

    r = run_cli("gen-scen --map " + map_path.string() + " --count 4 --seed 17 --out " +
                scen_path.string());
    CHECK(r.exit_code == 0);
    CHECK(read_file(scen_path) ==
          cocbs_cli::generate_scen_text(cocbs_cli::generate_map_text("random", 9, 7, 0.1, 13),
                                        "smoke.map", 4, 17));

    r = run_cli("gen-map --style maze --out " + map_path.string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown map style") != std::string::npos);

    // --out is required; CLI11 rejects the call before our code runs.
    r = run_cli("gen-map --style random");
    CHECK(r.exit_code != 0);
}

TEST_CASE("bench subcommand emits CSV on stdout and the report on stderr") {
    const OpenFixture f = write_open_fixture();
    const std::string base = "bench --map " + f.map_path.string() + " --scen " + f.scen_path.string();

    CommandResult r = run_cli(base + " --tasks 1 --variants pc-le --seed 4");
    CHECK(r.exit_code == 0);
    const std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "# map=open_6x6.map seed=4 timeout_ms=120000");
    CHECK(lines[2].rfind("open_6x6.map,open_6x6.scen,1,pc-le,1,8,", 0) == 0);
    CHECK(r.err.find("k=1 variant=pc-le: solved 1/1 (100.0%)") != std::string::npos);
    CHECK(r.err.find("rejected: 0") != std::string::npos);

    // Directories of scen files are accepted in place of single files, and
    // --format json --out writes a parseable document.
    const std::filesystem::path scen_dir = scratch_dir() / "scen_dir";
    std::filesystem::create_directories(scen_dir);
    std::filesystem::copy_file(f.scen_path, scen_dir / "open_6x6.scen",
                               std::filesystem::copy_options::overwrite_existing);
    const std::filesystem::path json_path = scratch_dir() / "bench.json";
    r = run_cli("bench --map " + f.map_path.string() + " --scen " + scen_dir.string() +
                " --tasks 2 --variants pc --format json --out " + json_path.string());
    CHECK(r.exit_code == 0);
    const nlohmann::json doc = nlohmann::json::parse(read_file(json_path));
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["rows"][0]["soc"] == 26);

    r = run_cli(base + " --tasks 0");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("bad task count '0'") != std::string::npos);

    r = run_cli(base + " --variants pc,nope");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown variant 'nope'") != std::string::npos);

    r = run_cli(base + " --format yaml");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("unknown format 'yaml'") != std::string::npos);
}
