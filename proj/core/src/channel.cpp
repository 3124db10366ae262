#include "skylease/channel.hpp"

#include <cmath>

#include "skylease/errors.hpp"

namespace skylease {

LinkGain link_gain(const Position3D& a, const Position3D& b, double exponent) {
    const double d = euclidean(a, b);
    if (d == 0.0)
        throw SingularityError("link_gain: coincident endpoints");
    return LinkGain{std::pow(d, -exponent)};
}

double primary_rate(const Position3D& relay_pos, const Scenario& sc) {
    const double exp = sc.phys.path_loss_exponent;
    const double d_tx = euclidean(relay_pos, sc.nodes.primary_tx);
    const double d_rx = euclidean(relay_pos, sc.nodes.primary_rx);
    if (d_tx == 0.0)
        throw SingularityError("primary_rate: relay coincident with primary_tx");
    if (d_rx == 0.0)
        throw SingularityError("primary_rate: relay coincident with primary_rx");
    const double a = sc.phys.p_pt * std::pow(d_tx, -exp);
    const double b = sc.phys.p_uav * std::pow(d_rx, -exp);
    const double snr = a * b / (sc.phys.noise_power + a + b);
    return 0.5 * std::log2(1.0 + snr);
}

double sensing_rate(const Position3D& uav_pos, double lambda, const Scenario& sc) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw ContractViolation("sensing_rate: lambda must be in (0, 1]");
    const double d = euclidean(uav_pos, sc.nodes.emergency_center);
    if (d == 0.0)
        throw SingularityError("sensing_rate: UAV coincident with emergency center");
    const double g = std::pow(d, -sc.phys.path_loss_exponent);
    return 0.5 * lambda * std::log2(1.0 + sc.phys.p_uav * g / sc.phys.noise_power);
}

double total_sensing_rate(const std::map<int, Position3D>& positions,
                          const TimeAllocation& alloc, const Scenario& sc) {
    double sum = 0.0;
    for (const auto& [uav, lambda] : alloc.lambda) {
        auto it = positions.find(uav);
        if (it == positions.end())
            throw ContractViolation("total_sensing_rate: missing position for UAV " +
                                    std::to_string(uav));
        sum += sensing_rate(it->second, lambda, sc);
    }
    return sum;
}

TimeAllocation time_shares(const Scenario& sc, const std::map<int, int>& assignment) {
    TimeAllocation out;
    const double total = sc.priorities.total_weight();
    if (total <= 0.0) return out;

    double granted = 0.0;
    int unweighted = 0;
    for (const auto& [uav, region] : assignment) {
        const double w = sc.priorities.weight_of(region);
        if (w > 0.0) {
            out.lambda[uav] = w / total;
            granted += w / total;
        } else {
            ++unweighted;
        }
    }
    if (unweighted == 0) return out;

    const double floor =
        std::min(kMinSensingShare, (1.0 - granted) / unweighted);
    if (floor <= 0.0) return out;
    for (const auto& [uav, region] : assignment)
        if (sc.priorities.weight_of(region) <= 0.0) out.lambda[uav] = floor;
    return out;
}

}  // namespace skylease
