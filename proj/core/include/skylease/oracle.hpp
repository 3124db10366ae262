#pragma once

#include <map>
#include <vector>

#include "skylease/learner.hpp"
#include "skylease/scenario.hpp"

namespace skylease {
namespace oracle {

// Brute-force references used by tests and the verify command. These share
// no logic with the allocator or the learner: transitions, rewards, and the
// contest rule are restated here from scratch.

enum class Role { Relay, Sensing };

struct BestCell {
    int local_cell = -1;   // region-local index
    int grid_cell = -1;    // same cell in grid coordinates
    double rate = 0.0;
};

// Evaluates the role's rate at every cell of the region and returns the
// argmax; ties resolve to the lowest cell index. Sensing uses a unit share.
BestCell best_cell(int region, Role role, const Scenario& sc);

struct ValueIterationResult {
    QTable q_star;
    int sweeps = 0;
};

// Bellman optimality fixed point for one region's deterministic MDP under
// the three-case reward, to absolute tolerance 1e-10. Regions are capped at
// 81 states; exceeding the cap or 1e5 sweeps is a contract bug and throws.
ValueIterationResult value_iteration(int region, Role role, const Scenario& sc,
                                     const LearningParams& params);

// Replays the emergency-center contest rule over every processing order of
// the sensing UAVs (N-1 <= 8 guard) and checks the outcomes coincide.
// Returns the matching (uav -> region).
std::map<int, int> exhaustive_matching(const std::vector<int>& uavs,
                                       const std::vector<int>& regions,
                                       const Scenario& sc);

// Exhaustive argmax of f(u) = E(u) - d(u) * psi_move over all UAVs,
// recomputed from first principles.
int exhaustive_relay_argmax(const Scenario& sc, int primary_region);

}  // namespace oracle
}  // namespace skylease
