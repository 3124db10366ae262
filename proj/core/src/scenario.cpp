#include "skylease/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "skylease/rng.hpp"

namespace skylease {

double euclidean(const Position3D& a, const Position3D& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double PriorityMap::total_weight() const {
    double s = 0.0;
    for (const auto& [region, w] : weights) s += w;
    return s;
}

std::vector<int> PriorityMap::prioritized_regions() const {
    std::vector<int> out;
    for (const auto& [region, w] : weights)
        if (w > 0.0) out.push_back(region);
    return out;
}

int cell_index(const GridSpec& grid, int row, int col) {
    return row * grid.length_l1 + col;
}

int cell_row(const GridSpec& grid, int cell) { return cell / grid.length_l1; }

int cell_col(const GridSpec& grid, int cell) { return cell % grid.length_l1; }

static void check_cell(const GridSpec& grid, int cell, const char* what) {
    if (cell < 0 || cell >= grid.num_cells())
        throw ContractViolation(std::string(what) + ": cell index " +
                                std::to_string(cell) + " out of range");
}

Position3D cell_to_position(const GridSpec& grid, int cell) {
    check_cell(grid, cell, "cell_to_position");
    return Position3D{cell_col(grid, cell) * grid.cell_pitch,
                      cell_row(grid, cell) * grid.cell_pitch,
                      grid.uav_altitude};
}

int region_of(const GridSpec& grid, int cell) {
    check_cell(grid, cell, "region_of");
    const int region_row = cell_row(grid, cell) / grid.region_r2;
    const int region_col = cell_col(grid, cell) / grid.region_r1;
    return region_row * grid.regions_x() + region_col;
}

static void check_region(const GridSpec& grid, int region, const char* what) {
    if (region < 0 || region >= grid.num_regions())
        throw ContractViolation(std::string(what) + ": region index " +
                                std::to_string(region) + " out of range");
}

std::vector<int> cells_of(const GridSpec& grid, int region) {
    check_region(grid, region, "cells_of");
    const int base_row = (region / grid.regions_x()) * grid.region_r2;
    const int base_col = (region % grid.regions_x()) * grid.region_r1;
    std::vector<int> out;
    out.reserve(grid.states_per_region());
    for (int r = 0; r < grid.region_r2; ++r)
        for (int c = 0; c < grid.region_r1; ++c)
            out.push_back(cell_index(grid, base_row + r, base_col + c));
    return out;
}

int region_center_cell(const GridSpec& grid, int region) {
    check_region(grid, region, "region_center_cell");
    const int base_row = (region / grid.regions_x()) * grid.region_r2;
    const int base_col = (region % grid.regions_x()) * grid.region_r1;
    return cell_index(grid, base_row + grid.region_r2 / 2,
                      base_col + grid.region_r1 / 2);
}

int manhattan_hops(const GridSpec& grid, int cell_a, int cell_b) {
    check_cell(grid, cell_a, "manhattan_hops");
    check_cell(grid, cell_b, "manhattan_hops");
    return std::abs(cell_row(grid, cell_a) - cell_row(grid, cell_b)) +
           std::abs(cell_col(grid, cell_a) - cell_col(grid, cell_b));
}

int closest_region_to(const GridSpec& grid, const Position3D& p) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int r = 0; r < grid.num_regions(); ++r) {
        const double d = euclidean(cell_to_position(grid, region_center_cell(grid, r)), p);
        if (d < best_d) {
            best_d = d;
            best = r;
        }
    }
    return best;
}

Scenario build_scenario(const GridSpec& grid, const NodeSet& nodes,
                        const PhysicalParams& phys, const PriorityMap& prio) {
    if (grid.length_l1 < 1 || grid.length_l2 < 1)
        throw ValidationError("grid.length_l1/length_l2: dimensions must be >= 1");
    if (grid.region_r1 < 1 || grid.region_r2 < 1)
        throw ValidationError("grid.region_r1/region_r2: dimensions must be >= 1");
    if (grid.length_l1 % grid.region_r1 != 0)
        throw ValidationError("grid.region_r1: regions must tile length_l1 exactly");
    if (grid.length_l2 % grid.region_r2 != 0)
        throw ValidationError("grid.region_r2: regions must tile length_l2 exactly");
    if (grid.uav_altitude <= 0.0)
        throw ValidationError("grid.uav_altitude: must be > 0");
    if (grid.cell_pitch <= 0.0)
        throw ValidationError("grid.cell_pitch: must be > 0");

    const int n = nodes.num_uavs();
    if (n < 1) throw ValidationError("nodes.uav_initial_cells: at least one UAV required");
    if (static_cast<int>(nodes.uav_initial_energy.size()) != n)
        throw ValidationError("nodes.uav_initial_energy: size mismatch with uav_initial_cells");
    if (grid.num_regions() < n)
        throw ValidationError("grid: region count M must be >= number of UAVs N");
    for (int i = 0; i < n; ++i) {
        if (nodes.uav_initial_cells[i] < 0 || nodes.uav_initial_cells[i] >= grid.num_cells())
            throw ValidationError("nodes.uav_initial_cells[" + std::to_string(i) +
                                  "]: out of range");
        if (!(nodes.uav_initial_energy[i] > 0.0))
            throw ValidationError("nodes.uav_initial_energy[" + std::to_string(i) +
                                  "]: must be > 0");
    }
    if (nodes.primary_tx.x == nodes.primary_rx.x &&
        nodes.primary_tx.y == nodes.primary_rx.y &&
        nodes.primary_tx.z == nodes.primary_rx.z)
        throw ValidationError("nodes.primary_rx: must differ from primary_tx");

    if (!(phys.p_pt > 0.0)) throw ValidationError("phys.p_pt: must be > 0");
    if (!(phys.p_uav > 0.0)) throw ValidationError("phys.p_uav: must be > 0");
    if (!(phys.noise_power > 0.0)) throw ValidationError("phys.noise_power: must be > 0");
    if (!(phys.path_loss_exponent > 0.0))
        throw ValidationError("phys.path_loss_exponent: must be > 0");
    if (!(phys.psi_move > phys.psi_tx && phys.psi_tx > 0.0))
        throw ValidationError("phys.psi_move/psi_tx: require psi_move > psi_tx > 0");

    if (prio.weights.empty() && n > 1)
        throw ValidationError("priorities.weights: empty priority set");
    int positive = 0;
    for (const auto& [region, w] : prio.weights) {
        if (region < 0 || region >= grid.num_regions())
            throw ValidationError("priorities.weights: region " + std::to_string(region) +
                                  " out of range");
        if (!std::isfinite(w) || w < 0.0)
            throw ValidationError("priorities.weights: weight for region " +
                                  std::to_string(region) + " must be finite and >= 0");
        if (w > 0.0) ++positive;
    }
    if (positive < n - 1)
        throw ValidationError("priorities.weights: need at least N-1 regions with weight > 0");

    return Scenario{grid, nodes, phys, prio};
}

Scenario random_scenario(std::uint64_t seed, const ScenarioTemplate& tmpl) {
    const GridSpec& grid = tmpl.grid;
    const int n = tmpl.n_uavs;
    const int cells = grid.num_cells();
    // The fleet plus PT, PR and EC all occupy distinct cells.
    if (n + 3 > cells)
        throw InfeasibleError("random_scenario: more nodes than grid cells");
    if (grid.num_regions() < n)
        throw InfeasibleError("random_scenario: fewer regions than UAVs");

    SplitMix64 rng(mix_seed(seed, stream_tag::scenario));

    NodeSet nodes;
    std::unordered_set<int> taken;
    auto draw_free_cell = [&]() {
        for (;;) {
            const int c = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(cells)));
            if (taken.insert(c).second) return c;
        }
    };

    for (int i = 0; i < n; ++i) nodes.uav_initial_cells.push_back(draw_free_cell());
    // Batteries quantized to the transmission cost granularity (0.5 J) so
    // that every energy value reachable by the ledger stays exactly
    // representable.
    for (int i = 0; i < n; ++i)
        nodes.uav_initial_energy.push_back(4000.0 + 0.5 * rng.next_below(2001));

    // PT, PR, EC occupy distinct cells, also distinct from each other.
    const int pt_cell = draw_free_cell();
    const int pr_cell = draw_free_cell();
    const int ec_cell = draw_free_cell();
    Position3D pt = cell_to_position(grid, pt_cell);
    Position3D pr = cell_to_position(grid, pr_cell);
    Position3D ec = cell_to_position(grid, ec_cell);
    pt.z = 0.0;  // primary pair on the ground
    pr.z = 0.0;
    ec.z = 2.0 * grid.uav_altitude;  // aerial controller above the fleet plane
    nodes.primary_tx = pt;
    nodes.primary_rx = pr;
    nodes.emergency_center = ec;

    // Distinct positive weights over N-1 regions, none of them the region the
    // relay will serve, so every prioritized region stays assignable.
    const int primary_region = closest_region_to(grid, pr);
    std::vector<int> candidates;
    for (int r = 0; r < grid.num_regions(); ++r)
        if (r != primary_region) candidates.push_back(r);
    PriorityMap prio;
    for (int k = 0; k < n - 1; ++k) {
        const std::uint32_t j =
            rng.next_below(static_cast<std::uint32_t>(candidates.size() - k));
        std::swap(candidates[k], candidates[k + j]);
        double w;
        do {
            w = rng.next_double();
        } while (w <= 0.0);
        prio.weights[candidates[k]] = w;
    }

    return build_scenario(grid, nodes, tmpl.phys, prio);
}

}  // namespace skylease
