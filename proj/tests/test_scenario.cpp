#include <doctest.h>

#include <algorithm>
#include <set>

#include "skylease/scenario.hpp"

using namespace skylease;

namespace {

GridSpec grid9() {
    GridSpec g;
    g.length_l1 = 9;
    g.length_l2 = 9;
    g.region_r1 = 3;
    g.region_r2 = 3;
    return g;
}

ScenarioTemplate tmpl9(int n = 5) {
    ScenarioTemplate t;
    t.grid = grid9();
    t.n_uavs = n;
    return t;
}

Scenario tiny_scenario() {
    GridSpec g = grid9();
    NodeSet nodes;
    nodes.primary_tx = {0.0, 0.0, 0.0};
    nodes.primary_rx = {8.0, 8.0, 0.0};
    nodes.emergency_center = {4.0, 4.0, 2.0};
    nodes.uav_initial_cells = {0, 1};
    nodes.uav_initial_energy = {4500.0, 4500.0};
    PriorityMap prio;
    prio.weights[1] = 0.7;
    prio.weights[2] = 0.3;
    return build_scenario(g, nodes, PhysicalParams{}, prio);
}

}  // namespace

TEST_CASE("region counts for the published grids") {
    CHECK(grid9().num_regions() == 9);

    GridSpec g81;
    g81.length_l1 = 81;
    g81.length_l2 = 81;
    g81.region_r1 = 27;
    g81.region_r2 = 27;
    CHECK(g81.num_regions() == 9);
    CHECK(g81.states_per_region() == 729);

    GridSpec g3;
    g3.length_l1 = 3;
    g3.length_l2 = 3;
    g3.region_r1 = 3;
    g3.region_r2 = 3;
    NodeSet nodes;
    nodes.primary_tx = {0.0, 0.0, 0.0};
    nodes.primary_rx = {2.0, 2.0, 0.0};
    nodes.emergency_center = {1.0, 1.0, 2.0};
    nodes.uav_initial_cells = {4};
    nodes.uav_initial_energy = {4200.0};
    const Scenario sc = build_scenario(g3, nodes, PhysicalParams{}, PriorityMap{});
    CHECK(sc.grid.num_regions() == 1);
}

TEST_CASE("cell geometry conventions") {
    const GridSpec g = grid9();
    const Position3D origin = cell_to_position(g, 0);
    CHECK(origin.x == 0.0);
    CHECK(origin.y == 0.0);
    CHECK(origin.z == g.uav_altitude);

    CHECK(region_of(g, cell_index(g, 4, 4)) == 4);

    for (int r = 0; r < g.num_regions(); ++r) CHECK(cells_of(g, r).size() == 9);

    CHECK_THROWS_AS(cell_to_position(g, 81), ContractViolation);
    CHECK_THROWS_AS(region_of(g, -1), ContractViolation);
}

TEST_CASE("region partition is exact") {
    const GridSpec g = grid9();
    std::set<int> seen;
    for (int r = 0; r < g.num_regions(); ++r)
        for (int c : cells_of(g, r)) CHECK(seen.insert(c).second);
    CHECK(static_cast<int>(seen.size()) == g.num_cells());
    for (int c = 0; c < g.num_cells(); ++c) {
        const int r = region_of(g, c);
        const auto cells = cells_of(g, r);
        CHECK(std::find(cells.begin(), cells.end(), c) != cells.end());
    }
}

TEST_CASE("validation names the offending field") {
    GridSpec g = grid9();
    g.region_r1 = 4;  // does not tile 9
    NodeSet nodes;
    nodes.primary_tx = {0.0, 0.0, 0.0};
    nodes.primary_rx = {1.0, 0.0, 0.0};
    nodes.uav_initial_cells = {0};
    nodes.uav_initial_energy = {1.0};
    CHECK_THROWS_WITH_AS(build_scenario(g, nodes, PhysicalParams{}, PriorityMap{}),
                         doctest::Contains("region_r1"), ValidationError);

    const Scenario ok = tiny_scenario();
    NodeSet bad_energy = ok.nodes;
    bad_energy.uav_initial_energy[1] = 0.0;
    CHECK_THROWS_WITH_AS(build_scenario(ok.grid, bad_energy, ok.phys, ok.priorities),
                         doctest::Contains("uav_initial_energy"), ValidationError);

    PriorityMap empty;
    CHECK_THROWS_WITH_AS(build_scenario(ok.grid, ok.nodes, ok.phys, empty),
                         doctest::Contains("weights"), ValidationError);
}

TEST_CASE("random_scenario is a pure function of seed and template") {
    const Scenario a = random_scenario(42, tmpl9());
    const Scenario b = random_scenario(42, tmpl9());
    CHECK(a.nodes.uav_initial_cells == b.nodes.uav_initial_cells);
    CHECK(a.nodes.uav_initial_energy == b.nodes.uav_initial_energy);
    CHECK(a.priorities.weights == b.priorities.weights);
    CHECK(a.nodes.primary_rx.x == b.nodes.primary_rx.x);

    const Scenario c = random_scenario(43, tmpl9());
    CHECK(a.nodes.uav_initial_cells != c.nodes.uav_initial_cells);
}

TEST_CASE("random_scenario draws energies in [4000, 5000] J") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scenario sc = random_scenario(seed, tmpl9());
        for (double e : sc.nodes.uav_initial_energy) {
            CHECK(e >= 4000.0);
            CHECK(e <= 5000.0);
        }
    }
}

TEST_CASE("random_scenario leaves the primary region selectable") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Scenario sc = random_scenario(seed, tmpl9());
        const int primary = closest_region_to(sc.grid, sc.nodes.primary_rx);
        const auto prio = sc.priorities.prioritized_regions();
        CHECK(prio.size() == 4);
        for (int r : prio) CHECK(r != primary);
        // UAV cells are collision-free.
        std::set<int> cells(sc.nodes.uav_initial_cells.begin(),
                            sc.nodes.uav_initial_cells.end());
        CHECK(cells.size() == sc.nodes.uav_initial_cells.size());
    }
}

TEST_CASE("generated scenarios pass build_scenario validation") {
    for (std::uint64_t seed = 100; seed < 200; ++seed) {
        const Scenario sc = random_scenario(seed, tmpl9());
        CHECK_NOTHROW(build_scenario(sc.grid, sc.nodes, sc.phys, sc.priorities));
    }
}

TEST_CASE("placement fails when UAVs outnumber cells") {
    ScenarioTemplate t;
    t.grid.length_l1 = 2;
    t.grid.length_l2 = 1;
    t.grid.region_r1 = 1;
    t.grid.region_r2 = 1;
    t.n_uavs = 3;
    CHECK_THROWS_AS(random_scenario(1, t), InfeasibleError);
}

TEST_CASE("manhattan hops and region centers") {
    const GridSpec g = grid9();
    CHECK(manhattan_hops(g, cell_index(g, 0, 0), cell_index(g, 2, 3)) == 5);
    // Center of region 4 (rows 3..5, cols 3..5) is (4, 4).
    CHECK(region_center_cell(g, 4) == cell_index(g, 4, 4));
}
