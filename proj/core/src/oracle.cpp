#include "skylease/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "skylease/channel.hpp"
#include "skylease/errors.hpp"

namespace skylease {
namespace oracle {

static double cell_rate(int grid_cell, Role role, const Scenario& sc) {
    const Position3D pos = cell_to_position(sc.grid, grid_cell);
    return role == Role::Relay ? primary_rate(pos, sc) : sensing_rate(pos, 1.0, sc);
}

BestCell best_cell(int region, Role role, const Scenario& sc) {
    const auto cells = cells_of(sc.grid, region);
    BestCell best;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double r = cell_rate(cells[i], role, sc);
        if (best.local_cell < 0 || r > best.rate) {
            best.local_cell = static_cast<int>(i);
            best.grid_cell = cells[i];
            best.rate = r;
        }
    }
    return best;
}

ValueIterationResult value_iteration(int region, Role role, const Scenario& sc,
                                     const LearningParams& params) {
    const RegionShape shape{sc.grid.region_r1, sc.grid.region_r2};
    const int states = shape.cells();
    if (states > 81)
        throw ContractViolation("value_iteration: region exceeds the 9x9 guard");

    const auto cells = cells_of(sc.grid, region);
    std::vector<double> rate(states);
    for (int s = 0; s < states; ++s) rate[s] = cell_rate(cells[s], role, sc);

    // Restated movement rules: local row-major grid, clipped at the borders.
    auto next_of = [&](int s, int a) -> int {
        const int row = s / shape.width;
        const int col = s % shape.width;
        switch (a) {
            case 0: return row > 0 ? s - shape.width : -1;
            case 1: return row < shape.height - 1 ? s + shape.width : -1;
            case 2: return col > 0 ? s - 1 : -1;
            case 3: return col < shape.width - 1 ? s + 1 : -1;
            default: return s;
        }
    };
    auto step_reward = [&](int s, int s2) -> double {
        if (s2 == s) return params.beta2;
        const double a = rate[s2], b = rate[s];
        if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b)) && a > b)
            return params.beta1;
        return params.beta3;
    };

    ValueIterationResult out;
    out.q_star = QTable(states);
    QTable next(states);
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double delta = 0.0;
        auto value_of = [&](int s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < kNumActions; ++a)
                if (next_of(s, a) >= 0) best = std::max(best, out.q_star.at(s, a));
            return best;
        };
        for (int s = 0; s < states; ++s) {
            for (int a = 0; a < kNumActions; ++a) {
                const int s2 = next_of(s, a);
                if (s2 < 0) continue;
                const double q = step_reward(s, s2) + params.gamma * value_of(s2);
                next.at(s, a) = q;
                delta = std::max(delta, std::abs(q - out.q_star.at(s, a)));
            }
        }
        out.q_star = next;
        out.sweeps = sweep + 1;
        if (delta < 1e-10) return out;
    }
    throw ContractViolation("value_iteration: no convergence within 1e5 sweeps");
}

int exhaustive_relay_argmax(const Scenario& sc, int primary_region) {
    const int center = region_center_cell(sc.grid, primary_region);
    int best = -1;
    double best_f = 0.0, best_e = 0.0;
    for (int u = 0; u < sc.num_uavs(); ++u) {
        const double e = sc.nodes.uav_initial_energy[u];
        const int d = std::abs(cell_row(sc.grid, sc.nodes.uav_initial_cells[u]) -
                               cell_row(sc.grid, center)) +
                      std::abs(cell_col(sc.grid, sc.nodes.uav_initial_cells[u]) -
                               cell_col(sc.grid, center));
        const double f = e - d * sc.phys.psi_move;
        if (best < 0 || f > best_f || (f == best_f && e > best_e)) {
            best = u;
            best_f = f;
            best_e = e;
        }
    }
    return best;
}

// One sequential pass of the contest rule for a fixed proposal order.
static std::map<int, int> contest_once(const std::vector<int>& order,
                                       const std::vector<int>& regions,
                                       const Scenario& sc) {
    auto g = [&](int u, int r) {
        const int d = manhattan_hops(sc.grid, sc.nodes.uav_initial_cells[u],
                                     region_center_cell(sc.grid, r));
        return sc.nodes.uav_initial_energy[u] - d * sc.phys.psi_move;
    };
    auto stronger = [&](int u, int v, int r) {
        const double gu = g(u, r), gv = g(v, r);
        if (gu != gv) return gu > gv;
        const double eu = sc.nodes.uav_initial_energy[u];
        const double ev = sc.nodes.uav_initial_energy[v];
        if (eu != ev) return eu > ev;
        return u < v;
    };
    std::map<int, std::vector<int>> pref;
    for (int u : order) {
        std::vector<int> list = regions;
        std::stable_sort(list.begin(), list.end(), [&](int a, int b) {
            const double ga = g(u, a), gb = g(u, b);
            if (ga != gb) return ga > gb;
            return a < b;
        });
        pref[u] = std::move(list);
    }
    std::map<int, int> holder;
    std::map<int, std::size_t> cursor;
    std::vector<int> free = order;
    while (!free.empty()) {
        const int u = free.front();
        free.erase(free.begin());
        auto& p = cursor[u];
        const auto& list = pref[u];
        for (; p < list.size(); ++p) {
            const int r = list[p];
            auto it = holder.find(r);
            if (it == holder.end()) {
                holder[r] = u;
                ++p;
                break;
            }
            if (stronger(u, it->second, r)) {
                free.push_back(it->second);
                it->second = u;
                ++p;
                break;
            }
        }
    }
    std::map<int, int> out;
    for (const auto& [r, u] : holder) out[u] = r;
    return out;
}

std::map<int, int> exhaustive_matching(const std::vector<int>& uavs,
                                       const std::vector<int>& regions,
                                       const Scenario& sc) {
    if (uavs.size() > 8)
        throw ContractViolation("exhaustive_matching: more than 8 sensing UAVs");
    std::vector<int> order = uavs;
    std::sort(order.begin(), order.end());
    const auto reference = contest_once(order, regions, sc);
    do {
        if (contest_once(order, regions, sc) != reference)
            throw ContractViolation("exhaustive_matching: contest outcome depends on order");
    } while (std::next_permutation(order.begin(), order.end()));
    return reference;
}

}  // namespace oracle
}  // namespace skylease
