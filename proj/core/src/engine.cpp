#include "skylease/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skylease/errors.hpp"
#include "skylease/rng.hpp"

namespace skylease {

void RunConfig::validate() const {
    if (runs < 1) throw ValidationError("run.runs: must be >= 1");
    if (episodes < 1) throw ValidationError("run.episodes: must be >= 1");
    if (steps < 0) throw ValidationError("run.steps: must be >= 0");
    if (mode < 0 || mode > 4) throw ValidationError("run.mode: must be in 0..4");
    if (!(dynamicity_threshold > 0.0))
        throw ValidationError("run.dynamicity_threshold: must be > 0 (or infinity)");
    for (const auto& ev : schedule)
        if (ev.episode < 0 || ev.episode >= episodes)
            throw ValidationError("run.schedule: event episode out of range");
}

ModePolicies apply_mode(int mode) {
    switch (mode) {
        case 0: return {RegionPolicy::Prioritized, AllocationPolicy::EnergyAware, MobilityPolicy::Learned};
        case 1: return {RegionPolicy::Prioritized, AllocationPolicy::Random, MobilityPolicy::Learned};
        case 2: return {RegionPolicy::Random, AllocationPolicy::Random, MobilityPolicy::Learned};
        case 3: return {RegionPolicy::Random, AllocationPolicy::EnergyAware, MobilityPolicy::Learned};
        case 4: return {RegionPolicy::Prioritized, AllocationPolicy::EnergyAware, MobilityPolicy::RandomWalk};
        default: throw ValidationError("run.mode: must be in 0..4");
    }
}

double energy_consumption_rate(const std::vector<double>& energy_trace) {
    if (energy_trace.size() < 5)
        throw ValidationError("energy_consumption_rate: episode shorter than 4 steps");
    const int steps = static_cast<int>(energy_trace.size()) - 1;
    const int k = (3 * steps) / 4;
    return (energy_trace[0] - energy_trace[k]) / static_cast<double>(k);
}

namespace {

// Builds the mission for one run given explicit fleet state. `cells` and
// `energies` default to the scenario's initial values; reallocation passes
// the fleet's current state instead.
MissionPlan plan_from_state(const Scenario& sc, int mode, std::uint64_t master_seed,
                            int run_index, const std::vector<int>& cells,
                            const std::vector<double>& energies) {
    Scenario view = sc;
    view.nodes.uav_initial_cells = cells;
    view.nodes.uav_initial_energy = energies;

    const ModePolicies pol = apply_mode(mode);
    const int n = view.num_uavs();
    const int primary = select_primary_region(view);

    std::vector<int> pool;
    if (pol.regions == RegionPolicy::Prioritized) {
        pool = sensing_region_pool(view, primary);
    } else {
        std::vector<int> candidates;
        for (int r = 0; r < view.grid.num_regions(); ++r)
            if (r != primary) candidates.push_back(r);
        SplitMix64 rng(mix_seed(master_seed, stream_tag::mode_regions,
                                static_cast<std::uint64_t>(run_index)));
        for (int k = 0; k < n - 1; ++k) {
            const std::uint32_t j =
                rng.next_below(static_cast<std::uint32_t>(candidates.size() - k));
            std::swap(candidates[k], candidates[k + j]);
            pool.push_back(candidates[k]);
        }
    }
    if (static_cast<int>(pool.size()) < n - 1)
        throw InfeasibleError("plan_mission: fewer candidate sensing regions than UAVs");

    Allocation alloc;
    if (pol.allocation == AllocationPolicy::EnergyAware) {
        const RelayChoice relay = select_relay_uav(view, primary);
        alloc = assign_sensing(view, relay.uav, primary, pool);
    } else {
        SplitMix64 rng(mix_seed(master_seed, stream_tag::mode_assign,
                                static_cast<std::uint64_t>(run_index)));
        const int relay = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
        std::vector<int> targets = pool;
        for (std::size_t k = 0; k + 1 < targets.size(); ++k) {
            const std::uint32_t j =
                rng.next_below(static_cast<std::uint32_t>(targets.size() - k));
            std::swap(targets[k], targets[k + j]);
        }
        alloc.primary_region = primary;
        alloc.relay_uav = relay;
        int slot = 0;
        for (int u = 0; u < n; ++u)
            if (u != relay) alloc.sensing_assignment[u] = targets[slot++];
        alloc.flight_hops.assign(n, 0);
        alloc.post_flight_energy.assign(n, 0.0);
        for (int u = 0; u < n; ++u) {
            const int dest = (u == relay) ? primary : alloc.sensing_assignment.at(u);
            alloc.flight_hops[u] = manhattan_hops(
                view.grid, view.nodes.uav_initial_cells[u],
                region_center_cell(view.grid, dest));
            alloc.post_flight_energy[u] = view.nodes.uav_initial_energy[u] -
                                          alloc.flight_hops[u] * view.phys.psi_move;
            if (alloc.post_flight_energy[u] < 0.0)
                throw InfeasibleError("plan_mission: UAV " + std::to_string(u) +
                                      " cannot afford the flight to region " +
                                      std::to_string(dest));
        }
    }

    const TimeAllocation shares = time_shares(view, alloc.sensing_assignment);
    const RegionShape shape{view.grid.region_r1, view.grid.region_r2};
    const int entry_local = (view.grid.region_r2 / 2) * view.grid.region_r1 +
                            view.grid.region_r1 / 2;

    MissionPlan plan;
    plan.primary_region = primary;
    plan.relay_uav = alloc.relay_uav;
    plan.agents.resize(n);
    for (int u = 0; u < n; ++u) {
        AgentPlan& a = plan.agents[u];
        a.uav = u;
        a.role = (u == alloc.relay_uav) ? UavRole::Relay : UavRole::Sensing;
        a.region = (u == alloc.relay_uav) ? primary : alloc.sensing_assignment.at(u);
        a.lambda = shares.share_of(u);
        a.flight_hops = alloc.flight_hops[u];
        a.post_flight_energy = alloc.post_flight_energy[u];
        a.entry_cell = entry_local;
        a.rate_by_cell.assign(shape.cells(), 0.0);
        const auto cells_g = cells_of(view.grid, a.region);
        if (a.role == UavRole::Relay) {
            for (int s = 0; s < shape.cells(); ++s)
                a.rate_by_cell[s] = primary_rate(cell_to_position(view.grid, cells_g[s]), view);
        } else if (a.lambda > 0.0) {
            for (int s = 0; s < shape.cells(); ++s)
                a.rate_by_cell[s] =
                    sensing_rate(cell_to_position(view.grid, cells_g[s]), a.lambda, view);
        }
    }
    return plan;
}

struct AgentRun {
    QTable q;
    AgentState state;
    int moves = 0;
    long tx = 0;
    double sum_rate = 0.0;
    double cum_reward = 0.0;
    std::vector<double> trace;  // lifetime mode: energy after each acted step
};

}  // namespace

MissionPlan plan_mission(const Scenario& sc, int mode, std::uint64_t master_seed,
                         int run_index) {
    return plan_from_state(sc, mode, master_seed, run_index,
                           sc.nodes.uav_initial_cells, sc.nodes.uav_initial_energy);
}

RunResult run(const Scenario& sc, const RunConfig& config, const LearningParams& params) {
    config.validate();
    params.validate();

    const int n = sc.num_uavs();
    const RegionShape shape{sc.grid.region_r1, sc.grid.region_r2};
    const bool random_walk = apply_mode(config.mode).mobility == MobilityPolicy::RandomWalk;

    RunResult result;
    result.runs = config.runs;
    result.episodes = config.episodes;
    result.n_uavs = n;
    result.metrics.resize(static_cast<std::size_t>(config.runs) * config.episodes * n);
    result.missions.resize(config.runs);

    std::vector<AgentRun> agents(n);

    for (int run_i = 0; run_i < config.runs; ++run_i) {
        Scenario world = sc;
        MissionPlan plan = plan_mission(world, config.mode, config.master_seed, run_i);
        for (int u = 0; u < n; ++u) agents[u].q = QTable(shape.cells());

        for (int ep = 0; ep < config.episodes; ++ep) {
            // Dynamicity hook: the controller stage reruns on the fleet's
            // current cells and energies, and learning restarts.
            for (const auto& ev : config.schedule) {
                if (ev.episode != ep || !dynamicity_exceeded(ev.signal, config.dynamicity_threshold))
                    continue;
                if (ev.primary_rx_cell >= 0) {
                    Position3D pr = cell_to_position(world.grid, ev.primary_rx_cell);
                    pr.z = 0.0;
                    world.nodes.primary_rx = pr;
                }
                std::vector<int> cur_cells(n);
                std::vector<double> cur_energy(n);
                for (int u = 0; u < n; ++u) {
                    const auto region_cells = cells_of(world.grid, plan.agents[u].region);
                    cur_cells[u] = region_cells[plan.agents[u].entry_cell];
                    cur_energy[u] = plan.agents[u].post_flight_energy;
                }
                plan = plan_from_state(world, config.mode, config.master_seed, run_i,
                                       cur_cells, cur_energy);
                for (int u = 0; u < n; ++u) agents[u].q = QTable(shape.cells());
                result.reallocations.push_back({run_i, ep, ev.signal});
            }

            int alive_count = n;
            for (int u = 0; u < n; ++u) {
                AgentRun& a = agents[u];
                a.state.cell = plan.agents[u].entry_cell;
                a.state.energy = plan.agents[u].post_flight_energy;
                a.state.last_rate = plan.agents[u].rate_by_cell[a.state.cell];
                a.state.alive = true;
                a.moves = 0;
                a.tx = 0;
                a.sum_rate = 0.0;
                a.cum_reward = 0.0;
                if (config.lifetime_mode) {
                    a.trace.clear();
                    a.trace.push_back(a.state.energy);
                }
            }

            std::vector<SplitMix64> streams;
            streams.reserve(n);
            for (int u = 0; u < n; ++u)
                streams.emplace_back(mix_seed(config.master_seed, stream_tag::agent,
                                              static_cast<std::uint64_t>(run_i),
                                              static_cast<std::uint64_t>(ep),
                                              static_cast<std::uint64_t>(plan.agents[u].region)));

            const int k75 = config.lifetime_mode ? 0 : (3 * config.steps) / 4;
            std::vector<double> energy_at_k75(n, 0.0);

            for (int step = 0;; ++step) {
                if (config.lifetime_mode ? alive_count == 0 : step >= config.steps) break;
                for (int u = 0; u < n; ++u) {
                    AgentRun& a = agents[u];
                    if (!a.state.alive) continue;
                    const AgentPlan& ap = plan.agents[u];

                    Action act;
                    if (random_walk) {
                        int cnt = 0;
                        const auto legal = legal_actions(shape, a.state.cell, &cnt);
                        act = legal[streams[u].next_below(static_cast<std::uint32_t>(cnt))];
                    } else {
                        act = choose_action(a.q, a.state.cell, shape, params, streams[u]);
                    }
                    const bool moved = act != Action::Stay;

                    if (config.lifetime_mode) {
                        const double cost =
                            sc.phys.psi_tx + (moved ? sc.phys.psi_move : 0.0);
                        if (a.state.energy < cost) {
                            a.state.alive = false;
                            --alive_count;
                            continue;
                        }
                    }

                    const int next = step_transition(shape, a.state.cell, act);
                    if (moved) {
                        a.state.energy -= sc.phys.psi_move;
                        ++a.moves;
                    }
                    const double rate = ap.rate_by_cell[next];
                    a.state.energy -= sc.phys.psi_tx;
                    ++a.tx;

                    const double r = reward(moved, rate, a.state.last_rate, params);
                    if (moved && std::abs(rate - a.state.last_rate) <=
                                     1e-9 * std::max(std::abs(rate), std::abs(a.state.last_rate)))
                        ++result.reward_gap_moves;
                    if (!random_walk) q_update(a.q, shape, a.state.cell, act, r, next, params);

                    a.sum_rate += rate;
                    a.cum_reward += r;
                    a.state.cell = next;
                    a.state.last_rate = rate;
                    if (config.lifetime_mode) a.trace.push_back(a.state.energy);
                }
                if (!config.lifetime_mode && step + 1 == k75)
                    for (int u = 0; u < n; ++u) energy_at_k75[u] = agents[u].state.energy;
            }

            for (int u = 0; u < n; ++u) {
                AgentRun& a = agents[u];
                EpisodeMetrics& m =
                    result.metrics[(static_cast<std::size_t>(run_i) * config.episodes + ep) * n + u];
                m.sum_throughput = a.sum_rate;
                m.cumulative_reward = a.cum_reward;
                m.movement_count = a.moves;
                m.lifetime_transmissions = config.lifetime_mode ? a.tx : 0;
                m.final_energy = a.state.energy;

                const double e_start = plan.agents[u].post_flight_energy;
                if (config.lifetime_mode) {
                    const int t = static_cast<int>(a.trace.size()) - 1;
                    const int k = (3 * t) / 4;
                    m.energy_consumption_rate = k > 0 ? (a.trace[0] - a.trace[k]) / k : 0.0;
                } else {
                    m.energy_consumption_rate =
                        k75 > 0 ? (e_start - energy_at_k75[u]) / k75 : 0.0;
                }

                // Energy ledger sanity. With the 0.5 J quantized presets the
                // identity is bit-exact; arbitrary user energies may round,
                // so the internal guard allows ulp-level drift.
                const double spent = a.moves * sc.phys.psi_move + a.tx * sc.phys.psi_tx;
                if (std::abs((e_start - a.state.energy) - spent) >
                    1e-9 * std::max(1.0, std::abs(spent)))
                    throw ContractViolation("engine: energy ledger mismatch for UAV " +
                                            std::to_string(u));
            }
        }

        result.missions[run_i] = plan;
        if (run_i == config.runs - 1) {
            result.final_qtables.resize(n);
            for (int u = 0; u < n; ++u) result.final_qtables[u] = agents[u].q;
        }
    }
    return result;
}

RunResult lifetime_run(const Scenario& sc, RunConfig config, const LearningParams& params) {
    config.lifetime_mode = true;
    return run(sc, config, params);
}

}  // namespace skylease
