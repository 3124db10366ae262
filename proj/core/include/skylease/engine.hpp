#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "skylease/allocator.hpp"
#include "skylease/channel.hpp"
#include "skylease/learner.hpp"
#include "skylease/scenario.hpp"

namespace skylease {

// Scripted environment change checked at the start of an episode: when
// signal exceeds the dynamicity threshold, the emergency-center stage reruns
// on the fleet's current positions and energies and all Q-tables reset.
struct DynamicityEvent {
    int episode = 0;
    double signal = 0.0;
    int primary_rx_cell = -1;  // optional PR relocation, -1 keeps it in place
};

struct RunConfig {
    int runs = 20;
    int episodes = 40;
    int steps = 75;
    int mode = 0;  // 0..4, see apply_mode
    double dynamicity_threshold = std::numeric_limits<double>::infinity();
    bool lifetime_mode = false;
    std::uint64_t master_seed = 1;
    std::vector<DynamicityEvent> schedule;

    void validate() const;
};

struct EpisodeMetrics {
    double sum_throughput = 0.0;       // accumulated bits/s/Hz over the episode
    double cumulative_reward = 0.0;
    int movement_count = 0;
    long lifetime_transmissions = 0;   // populated in lifetime mode, else 0
    double energy_consumption_rate = 0.0;  // joules per step
    double final_energy = 0.0;         // joules, may go negative in step-bounded runs
};

enum class RegionPolicy { Prioritized, Random };
enum class AllocationPolicy { EnergyAware, Random };
enum class MobilityPolicy { Learned, RandomWalk };

struct ModePolicies {
    RegionPolicy regions;
    AllocationPolicy allocation;
    MobilityPolicy mobility;
};

// mode 0: prioritized regions, energy-aware allocation, learned mobility
// mode 1: prioritized regions, random allocation, learned mobility
// mode 2: random regions, random allocation, learned mobility
// mode 3: random regions, energy-aware allocation, learned mobility
// mode 4: prioritized regions, energy-aware allocation, random walk
ModePolicies apply_mode(int mode);

enum class UavRole { Relay, Sensing };

// Resolved per-run mission: who flies where, with what share and rate field.
struct AgentPlan {
    int uav = -1;
    UavRole role = UavRole::Sensing;
    int region = -1;
    double lambda = 0.0;  // sensing half-slot share; 0 means no granted slot
    int flight_hops = 0;
    double post_flight_energy = 0.0;
    int entry_cell = 0;                // region-local index of the flight target
    std::vector<double> rate_by_cell;  // bits/s/Hz per region-local cell
};

struct MissionPlan {
    int primary_region = -1;
    int relay_uav = -1;
    std::vector<AgentPlan> agents;  // indexed by uav
};

struct ReallocationRecord {
    int run = 0;
    int episode = 0;
    double signal = 0.0;
};

struct RunResult {
    int runs = 0;
    int episodes = 0;
    int n_uavs = 0;
    std::vector<EpisodeMetrics> metrics;     // [run][episode][uav], flattened
    std::vector<MissionPlan> missions;       // mission in force at each run's end
    std::vector<ReallocationRecord> reallocations;
    std::vector<QTable> final_qtables;       // last run's tables, indexed by uav
    long reward_gap_moves = 0;               // moves that left the rate unchanged

    const EpisodeMetrics& at(int run, int episode, int uav) const {
        return metrics[(run * episodes + episode) * n_uavs + uav];
    }
};

// Builds the mission for one run of the given mode. Random modes draw their
// region set and assignment from run-indexed substreams of the master seed.
MissionPlan plan_mission(const Scenario& sc, int mode, std::uint64_t master_seed,
                         int run_index);

// Executes runs x episodes x steps of independent per-UAV Q-learning over
// the missions produced by plan_mission. Step-bounded runs keep the energy
// ledger but never ground a UAV; lifetime runs (config.lifetime_mode) run
// unbounded episodes in which a UAV dies once it cannot afford its next
// action. Deterministic in (scenario, config, params).
RunResult run(const Scenario& sc, const RunConfig& config, const LearningParams& params);

// run() with lifetime semantics forced on.
RunResult lifetime_run(const Scenario& sc, RunConfig config, const LearningParams& params);

// Joules per step over the first floor(0.75 T) steps of an episode trace.
// `energy_trace` holds T+1 samples: the start energy followed by the energy
// after each step. Throws ValidationError for traces shorter than 4 steps.
double energy_consumption_rate(const std::vector<double>& energy_trace);

// True when the hook must re-initiate the emergency-center stage.
inline bool dynamicity_exceeded(double signal, double threshold) {
    return signal > threshold;
}

}  // namespace skylease
