#include "skylease/allocator.hpp"

#include <algorithm>
#include <string>

namespace skylease {

int select_primary_region(const Scenario& sc) {
    return closest_region_to(sc.grid, sc.nodes.primary_rx);
}

static int hops_to_region_center(const Scenario& sc, int uav, int region) {
    return manhattan_hops(sc.grid, sc.nodes.uav_initial_cells[uav],
                          region_center_cell(sc.grid, region));
}

RelayChoice select_relay_uav(const Scenario& sc, int primary_region) {
    const int n = sc.num_uavs();
    RelayChoice best;
    for (int u = 0; u < n; ++u) {
        const double e = sc.nodes.uav_initial_energy[u];
        const double score = e - hops_to_region_center(sc, u, primary_region) * sc.phys.psi_move;
        const bool wins =
            best.uav < 0 || score > best.score ||
            (score == best.score && e > sc.nodes.uav_initial_energy[best.uav]);
        if (wins) best = RelayChoice{u, score};
    }
    if (best.score < 0.0)
        throw InfeasibleError("select_relay_uav: no UAV can reach the primary region");
    return best;
}

std::vector<int> preference_list(int uav, const Scenario& sc,
                                 const std::vector<int>& regions) {
    const double e = sc.nodes.uav_initial_energy[uav];
    std::vector<std::pair<double, int>> scored;
    scored.reserve(regions.size());
    for (int r : regions)
        scored.emplace_back(e - hops_to_region_center(sc, uav, r) * sc.phys.psi_move, r);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(scored.size());
    for (const auto& [g, r] : scored) out.push_back(r);
    return out;
}

std::vector<int> sensing_region_pool(const Scenario& sc, int primary_region) {
    std::vector<int> pool;
    for (int r : sc.priorities.prioritized_regions())
        if (r != primary_region) pool.push_back(r);
    return pool;
}

Allocation assign_sensing(const Scenario& sc, int relay, int primary_region,
                          const std::vector<int>& regions, MatchStats* stats) {
    const int n = sc.num_uavs();
    std::vector<int> sensing;
    for (int u = 0; u < n; ++u)
        if (u != relay) sensing.push_back(u);
    if (static_cast<int>(regions.size()) < static_cast<int>(sensing.size()))
        throw InfeasibleError("assign_sensing: fewer sensing regions than sensing UAVs");

    // Preference lists and per-(uav, region) scores.
    std::map<int, std::vector<int>> prefs;
    for (int u : sensing) prefs[u] = preference_list(u, sc, regions);
    auto g_score = [&](int u, int r) {
        return sc.nodes.uav_initial_energy[u] -
               hops_to_region_center(sc, u, r) * sc.phys.psi_move;
    };
    // Contest order: higher post-flight energy wins the region, ties prefer
    // the higher initial energy, then the lower index.
    auto beats = [&](int u, int v, int r) {
        const double gu = g_score(u, r), gv = g_score(v, r);
        if (gu != gv) return gu > gv;
        const double eu = sc.nodes.uav_initial_energy[u];
        const double ev = sc.nodes.uav_initial_energy[v];
        if (eu != ev) return eu > ev;
        return u < v;
    };

    std::map<int, int> holder;  // region -> uav
    std::map<int, std::size_t> next_pref;
    std::vector<int> free_uavs = sensing;
    int rounds = 0;
    while (!free_uavs.empty()) {
        const int u = free_uavs.front();
        free_uavs.erase(free_uavs.begin());
        const auto& list = prefs[u];
        std::size_t& p = next_pref[u];
        for (; p < list.size(); ++p) {
            ++rounds;
            const int r = list[p];
            auto it = holder.find(r);
            if (it == holder.end()) {
                holder[r] = u;
                ++p;
                break;
            }
            if (beats(u, it->second, r)) {
                free_uavs.push_back(it->second);
                it->second = u;
                ++p;
                break;
            }
        }
    }
    if (stats) stats->contest_rounds = rounds;

    Allocation out;
    out.primary_region = primary_region;
    out.relay_uav = relay;
    for (const auto& [r, u] : holder) out.sensing_assignment[u] = r;

    out.flight_hops.assign(n, 0);
    out.post_flight_energy.assign(n, 0.0);
    for (int u = 0; u < n; ++u) {
        const int dest = (u == relay) ? primary_region : out.sensing_assignment.at(u);
        out.flight_hops[u] = hops_to_region_center(sc, u, dest);
        out.post_flight_energy[u] =
            sc.nodes.uav_initial_energy[u] - out.flight_hops[u] * sc.phys.psi_move;
        if (out.post_flight_energy[u] < 0.0)
            throw InfeasibleError("assign_sensing: UAV " + std::to_string(u) +
                                  " cannot afford the flight to region " +
                                  std::to_string(dest));
    }
    return out;
}

Allocation assign_sensing(const Scenario& sc, int relay, int primary_region,
                          MatchStats* stats) {
    return assign_sensing(sc, relay, primary_region,
                          sensing_region_pool(sc, primary_region), stats);
}

}  // namespace skylease
