#include <doctest.h>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "test_helpers.hpp"
#include "wellformed.hpp"

using namespace cocbs;
using namespace cocbs::testing;

namespace {

std::set<Cell> endpoint_set(const Instance& inst) {
    std::set<Cell> eps;
    for (int i = 0; i < inst.num_tasks(); ++i) {
        eps.insert(inst.tasks[static_cast<size_t>(i)].start);
        eps.insert(inst.tasks[static_cast<size_t>(i)].goal);
        eps.insert(inst.leader_starts[static_cast<size_t>(i)]);
        eps.insert(inst.follower_starts[static_cast<size_t>(i)]);
    }
    return eps;
}

// True when a path from `from` to `to` exists whose interior cells all lie
// outside the endpoint set; the ends themselves are exempt.
bool ref_connected(const GridMap& map, const std::set<Cell>& eps, Cell from, Cell to) {
    if (from == to) return true;
    std::vector<uint8_t> seen(static_cast<size_t>(map.size()), 0);
    std::vector<Cell> queue{from};
    seen[static_cast<size_t>(map.index(from))] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
        Cell c = queue[head];
        for (const auto& m : GridMap::kMoves) {
            Cell n{c.row + m[0], c.col + m[1]};
            if (!map.traversable(n)) continue;
            if (n == to) return true;
            if (eps.count(n)) continue;
            size_t idx = static_cast<size_t>(map.index(n));
            if (seen[idx]) continue;
            seen[idx] = 1;
            queue.push_back(n);
        }
    }
    return false;
}

// Definition-level reference: first failing task (condition 1 before 2), or
// (-1, 0) for a well-formed instance.
std::pair<int, int> ref_verdict(const Instance& inst) {
    const std::set<Cell> eps = endpoint_set(inst);
    for (int i = 0; i < inst.num_tasks(); ++i) {
        Cell s = inst.tasks[static_cast<size_t>(i)].start;
        Cell g = inst.tasks[static_cast<size_t>(i)].goal;
        Cell leader = inst.leader_starts[static_cast<size_t>(i)];
        Cell follower = inst.follower_starts[static_cast<size_t>(i)];
        bool meeting_cell = false;
        for (int r = 0; r < inst.map.height() && !meeting_cell; ++r)
            for (int c = 0; c < inst.map.width() && !meeting_cell; ++c) {
                Cell v{r, c};
                if (!inst.map.traversable(v) || eps.count(v)) continue;
                meeting_cell = ref_connected(inst.map, eps, v, s) &&
                               ref_connected(inst.map, eps, v, g) &&
                               ref_connected(inst.map, eps, v, follower);
            }
        if (!meeting_cell) return {i, 1};
        if (!ref_connected(inst.map, eps, leader, s)) return {i, 2};
    }
    return {-1, 0};
}

}  // namespace

TEST_CASE("a split hand-off region fails condition 1") {
    Instance inst = blocked_handoff_instance();
    WellFormedReport r = is_well_formed(inst);
    CHECK_FALSE(r.well_formed);
    CHECK(r.failing_task == 0);
    CHECK(r.failing_condition == 1);
    CHECK(r.message.find("task 0") != std::string::npos);
    CHECK(r.cells_visited > 0);
}

TEST_CASE("a connected corridor instance is well formed") {
    WellFormedReport r = is_well_formed(corridor_handoff_instance());
    CHECK(r.well_formed);
    CHECK(r.failing_task == -1);
    CHECK(r.failing_condition == 0);
    CHECK(r.message.empty());
}

TEST_CASE("the reference two-task instance is rejected by the structural check") {
    // Solvable in practice (the solver finds cost 14 with the check skipped),
    // but the crowded 4x4 leaves task 0's goal cut off from the rest of the
    // non-endpoint subgraph, so the conservative structural test refuses it.
    WellFormedReport r = is_well_formed(golden_two_task_instance());
    CHECK_FALSE(r.well_formed);
    CHECK(r.failing_task == 0);
    CHECK(r.failing_condition == 1);
}

TEST_CASE("a walled-in leader fails condition 2") {
    Instance inst;
    // Two-cell-thick ring so the corner endpoints cannot sever it themselves.
    inst.map = map_from_rows({
        ".......",
        ".......",
        "..@@@..",
        "..@.@..",
        "..@@@..",
        ".......",
        ".......",
    });
    inst.tasks = {Task{Cell{0, 0}, Cell{0, 6}}};
    inst.leader_starts = {Cell{3, 3}};  // sealed pocket, far from the task start
    inst.follower_starts = {Cell{6, 0}};
    validate_instance(inst);
    WellFormedReport r = is_well_formed(inst);
    CHECK_FALSE(r.well_formed);
    CHECK(r.failing_task == 0);
    CHECK(r.failing_condition == 2);
    CHECK(r.message.find("leader") != std::string::npos);
}

TEST_CASE("a leader adjacent to or on the task start always satisfies condition 2") {
    Instance inst;
    inst.map = map_from_rows({"...", "...", "..."});
    inst.tasks = {Task{Cell{0, 1}, Cell{2, 1}}};
    inst.leader_starts = {Cell{0, 0}};  // adjacent to the task start
    inst.follower_starts = {Cell{2, 2}};
    validate_instance(inst);
    CHECK(is_well_formed(inst).well_formed);

    inst.leader_starts[0] = inst.tasks[0].start;  // standing on it
    validate_instance(inst);
    CHECK(is_well_formed(inst).well_formed);
}

TEST_CASE("one shared free cell adjacent to all three legs suffices") {
    Instance inst;
    inst.map = map_from_rows({"...", "...", "..."});
    inst.tasks = {Task{Cell{0, 1}, Cell{1, 0}}};
    inst.leader_starts = {Cell{2, 1}};
    inst.follower_starts = {Cell{1, 2}};
    validate_instance(inst);
    // The four endpoints surround the centre; only (1,1) touches all legs.
    CHECK(is_well_formed(inst).well_formed);
}

TEST_CASE("a task's own goal can sever the hand-off corridor") {
    Instance narrow;
    narrow.map = map_from_rows({".....", "@@@@."});
    narrow.tasks = {Task{Cell{0, 4}, Cell{0, 2}}};
    narrow.leader_starts = {Cell{1, 4}};
    narrow.follower_starts = {Cell{0, 0}};
    validate_instance(narrow);
    WellFormedReport r = is_well_formed(narrow);
    CHECK_FALSE(r.well_formed);
    CHECK(r.failing_condition == 1);

    // Opening the second row reconnects the two sides around the goal.
    Instance open = narrow;
    open.map = map_from_rows({".....", "....."});
    validate_instance(open);
    CHECK(is_well_formed(open).well_formed);
}

TEST_CASE("the meeting-table prefilter is necessary but not sufficient") {
    Instance blocked = blocked_handoff_instance();
    auto blocked_tables = build_meeting_tables(blocked);
    CHECK(meeting_table_prefilter(blocked, blocked_tables));  // accepted here
    CHECK_FALSE(is_well_formed(blocked).well_formed);         // rejected here

    Instance split;  // the two legs can never meet at all
    split.map = map_from_rows({".@.", ".@.", ".@."});
    split.tasks = {Task{Cell{0, 2}, Cell{2, 2}}};
    split.leader_starts = {Cell{0, 0}};
    split.follower_starts = {Cell{1, 2}};
    validate_instance(split);
    auto split_tables = build_meeting_tables(split);
    CHECK_FALSE(meeting_table_prefilter(split, split_tables));

    Instance good = corridor_handoff_instance();
    auto good_tables = build_meeting_tables(good);
    CHECK(meeting_table_prefilter(good, good_tables));
}

TEST_CASE("the component labeling agrees with the definition on random instances") {
    std::mt19937_64 rng(7401);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int well_formed_seen = 0;
    int rejected_seen = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int h = 4 + static_cast<int>(rng() % 3);
        const int w = 4 + static_cast<int>(rng() % 4);
        std::vector<std::string> rows(static_cast<size_t>(h), std::string(static_cast<size_t>(w), '.'));
        std::vector<Cell> free;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                if (coin(rng) < 0.25)
                    rows[static_cast<size_t>(r)][static_cast<size_t>(c)] = '@';
                else
                    free.push_back(Cell{r, c});
            }
        const int k = 1 + static_cast<int>(rng() % 3);
        if (static_cast<int>(free.size()) < 4 * k) continue;
        std::shuffle(free.begin(), free.end(), rng);
        Instance inst;
        inst.map = map_from_rows(rows);
        for (int i = 0; i < k; ++i) {
            inst.tasks.push_back(Task{free[static_cast<size_t>(4 * i)], free[static_cast<size_t>(4 * i + 1)]});
            inst.leader_starts.push_back(free[static_cast<size_t>(4 * i + 2)]);
            inst.follower_starts.push_back(free[static_cast<size_t>(4 * i + 3)]);
        }
        validate_instance(inst);

        WellFormedReport got = is_well_formed(inst);
        auto [want_task, want_cond] = ref_verdict(inst);
        CAPTURE(trial);
        CHECK(got.well_formed == (want_task == -1));
        CHECK(got.failing_task == want_task);
        CHECK(got.failing_condition == want_cond);
        (got.well_formed ? well_formed_seen : rejected_seen)++;
    }
    // The sampler must exercise both verdicts for the comparison to mean much.
    CHECK(well_formed_seen >= 20);
    CHECK(rejected_seen >= 20);
}
