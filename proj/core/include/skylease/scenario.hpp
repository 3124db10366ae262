#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "skylease/errors.hpp"

namespace skylease {

// Grid of length_l1 x length_l2 unit cells, tiled exactly by regions of
// region_r1 x region_r2 cells. Cell and region indices are row-major with
// row 0 at the top; moving Down increases the row.
struct GridSpec {
    int length_l1 = 0;        // cells along x
    int length_l2 = 0;        // cells along y
    int region_r1 = 0;        // region width (x cells)
    int region_r2 = 0;        // region height (y cells)
    double uav_altitude = 1.0;  // meters, constant for the whole fleet
    double cell_pitch = 1.0;    // meters per cell edge

    int num_cells() const { return length_l1 * length_l2; }
    int regions_x() const { return length_l1 / region_r1; }
    int regions_y() const { return length_l2 / region_r2; }
    int num_regions() const { return regions_x() * regions_y(); }
    int states_per_region() const { return region_r1 * region_r2; }
};

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double euclidean(const Position3D& a, const Position3D& b);

struct NodeSet {
    Position3D primary_tx;
    Position3D primary_rx;
    Position3D emergency_center;
    std::vector<int> uav_initial_cells;
    std::vector<double> uav_initial_energy;  // joules, one per UAV

    int num_uavs() const { return static_cast<int>(uav_initial_cells.size()); }
};

struct PhysicalParams {
    double p_pt = 0.01;            // primary transmit power, watts
    double p_uav = 0.02;           // UAV transmit power, watts
    double noise_power = 1e-9;     // sigma^2, watts
    double path_loss_exponent = 2.0;  // magnitude of the loss exponent
    double psi_move = 10.0;        // joules per cell movement
    double psi_tx = 0.5;           // joules per transmission
};

// Non-negative priority weight per region; regions not present weigh zero.
struct PriorityMap {
    std::map<int, double> weights;

    double weight_of(int region) const {
        auto it = weights.find(region);
        return it == weights.end() ? 0.0 : it->second;
    }
    double total_weight() const;
    std::vector<int> prioritized_regions() const;  // ascending region id
};

// Immutable world description. Construct through build_scenario or
// random_scenario; both validate every invariant.
struct Scenario {
    GridSpec grid;
    NodeSet nodes;
    PhysicalParams phys;
    PriorityMap priorities;

    int num_uavs() const { return nodes.num_uavs(); }
};

// Cell geometry. Cells are indexed row * L1 + col; cell 0 sits at the origin.
int cell_index(const GridSpec& grid, int row, int col);
int cell_row(const GridSpec& grid, int cell);
int cell_col(const GridSpec& grid, int cell);
Position3D cell_to_position(const GridSpec& grid, int cell);
int region_of(const GridSpec& grid, int cell);
std::vector<int> cells_of(const GridSpec& grid, int region);
// Cell at (floor(R1/2), floor(R2/2)) inside the region, in grid coordinates.
int region_center_cell(const GridSpec& grid, int region);
// Manhattan hop count between two cells.
int manhattan_hops(const GridSpec& grid, int cell_a, int cell_b);
// Region whose center cell minimizes 3D Euclidean distance to `p`, evaluated
// at UAV altitude; ties resolve to the lowest region id.
int closest_region_to(const GridSpec& grid, const Position3D& p);

// Validates all component invariants and returns the assembled scenario.
// Throws ValidationError naming the offending field.
Scenario build_scenario(const GridSpec& grid, const NodeSet& nodes,
                        const PhysicalParams& phys, const PriorityMap& prio);

struct ScenarioTemplate {
    GridSpec grid;
    PhysicalParams phys;
    int n_uavs = 5;
};

// Seeded random instance: UAV cells uniform without collision, initial
// energies uniform in [4000, 5000] J, PT/PR/EC at distinct cells (PT and PR
// on the ground, EC hovering above the plane), and N-1 distinct prioritized
// regions drawn from the regions other than the one closest to the primary
// receiver. Pure function of (seed, template).
Scenario random_scenario(std::uint64_t seed, const ScenarioTemplate& tmpl);

}  // namespace skylease
