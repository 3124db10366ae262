#pragma once

#include <map>
#include <vector>

#include "skylease/scenario.hpp"

namespace skylease {

// Result of the emergency-center stage. sensing_assignment maps each sensing
// UAV to its region; the relay is excluded and flies to the primary region's
// center. Energies are net of the flight cost for every UAV.
struct Allocation {
    int primary_region = -1;
    int relay_uav = -1;
    std::map<int, int> sensing_assignment;
    std::vector<double> post_flight_energy;
    std::vector<int> flight_hops;
};

struct MatchStats {
    int contest_rounds = 0;  // claim iterations consumed by the matching
};

// Region whose center cell lies closest (3D Euclidean) to the primary
// receiver; ties to the lowest region id.
int select_primary_region(const Scenario& sc);

// argmax over UAVs of f(u) = E(u) - d(u) * psi_move, d(u) the Manhattan hop
// count to the primary region's center cell. Ties prefer higher energy, then
// the lower index. Throws InfeasibleError when every score is negative.
struct RelayChoice {
    int uav = -1;
    double score = 0.0;
};
RelayChoice select_relay_uav(const Scenario& sc, int primary_region);

// Regions sorted descending by g(r) = E_i - d_i(r) * psi_move; ties by lower
// region id.
std::vector<int> preference_list(int uav, const Scenario& sc,
                                 const std::vector<int>& regions);

// Contest matching over the given sensing regions: each free UAV claims its
// best remaining preference; a claim displaces a weaker holder (lower g, then
// lower energy, then higher index loses). Charges flight energy to every UAV
// including the relay. Throws InfeasibleError when any post-flight energy
// would go negative.
Allocation assign_sensing(const Scenario& sc, int relay, int primary_region,
                          const std::vector<int>& regions,
                          MatchStats* stats = nullptr);

// Convenience: contest over the scenario's prioritized regions minus the
// primary region.
Allocation assign_sensing(const Scenario& sc, int relay, int primary_region,
                          MatchStats* stats = nullptr);

// Sensing regions available to the default pipeline: prioritized regions
// excluding the primary region, ascending id.
std::vector<int> sensing_region_pool(const Scenario& sc, int primary_region);

}  // namespace skylease
