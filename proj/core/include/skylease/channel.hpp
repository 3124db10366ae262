#pragma once

#include <map>

#include "skylease/scenario.hpp"

namespace skylease {

// Dimensionless power gain |h|^2 of a line-of-sight link.
struct LinkGain {
    double gain = 0.0;
};

// Sensing half-slot shares: lambda per sensing UAV, each in (0, 1], summing
// to at most 1. UAVs without a granted share are absent from the map.
struct TimeAllocation {
    std::map<int, double> lambda;

    double share_of(int uav) const {
        auto it = lambda.find(uav);
        return it == lambda.end() ? 0.0 : it->second;
    }
};

// gain = d^(-exponent) with d the 3D Euclidean distance; throws
// SingularityError for coincident endpoints.
LinkGain link_gain(const Position3D& a, const Position3D& b, double exponent = 2.0);

// The direct PT-PR link is modeled as unusable regardless of distance.
inline double primary_direct_gain(const Scenario&) { return 0.0; }

// Amplify-and-forward rate of the primary pair through a relay hovering at
// relay_pos, in bits/s/Hz. The direct term is eliminated (primary_direct_gain).
double primary_rate(const Position3D& relay_pos, const Scenario& sc);

// Rate of one sensing UAV toward the emergency center with share lambda.
double sensing_rate(const Position3D& uav_pos, double lambda, const Scenario& sc);

// Sum of sensing_rate over every UAV present in the allocation. `positions`
// maps uav index -> position and must cover alloc's keys.
double total_sensing_rate(const std::map<int, Position3D>& positions,
                          const TimeAllocation& alloc, const Scenario& sc);

// Minimal share granted to a sensing UAV whose region carries no priority
// weight, so every assigned UAV can still transmit in its slot.
inline constexpr double kMinSensingShare = 0.01;

// Shares derived from the priority weights of the assigned regions,
// normalized by the total weight of the whole priority map. UAVs sent to
// unprioritized regions receive only the minimal grant, scaled down further
// if the full budget is already committed. `assignment` maps sensing
// uav -> region. The shares sum to at most 1; when the assigned regions are
// exactly the prioritized ones they sum to 1.
TimeAllocation time_shares(const Scenario& sc, const std::map<int, int>& assignment);

}  // namespace skylease
