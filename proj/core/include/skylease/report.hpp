#pragma once

#include <string>
#include <vector>

#include "skylease/config.hpp"
#include "skylease/engine.hpp"

namespace skylease {

// Per-UAV metric rows. Columns are fixed:
// run,episode,uav,role,region,sum_rate,cum_reward,moves,lifetime_tx,energy_rate,final_energy
// With normalize set, sum_rate is min-max normalized per UAV within each run.
std::string metrics_csv(const RunResult& result, bool normalize = false);

// Structured allocation log: per run, one record per UAV with role, region,
// hops and post-flight energy, plus any mid-run reallocations.
std::string allocation_log_json(const RunResult& result);

// Digest of one run: config echo, per-episode aggregates and the headline
// numbers printed by the CLI.
std::string run_summary_json(const SimConfig& cfg, const RunResult& result);

// Flat numeric Q-table file: one row per state, five action columns.
std::string qtable_to_text(const QTable& q);
QTable qtable_from_text(const std::string& text, int expected_states);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Reducers shared by the compare harness and the acceptance suite.

// Mean over runs of the summed fleet throughput averaged over the last
// `window` episodes.
double final_window_sum_rate(const RunResult& result, int window);
// Mean over runs of the relay UAV's final-episode transmission count.
double final_episode_relay_lifetime(const RunResult& result);
// Mean energy consumption rate over every run, episode and UAV.
double mean_energy_rate(const RunResult& result);
// Steady-state consumption: mean energy rate over the last `window` episodes
// of every run, all UAVs.
double final_window_energy_rate(const RunResult& result, int window);

struct ModeStats {
    int mode = 0;
    int seeds = 0;
    double sum_rate_mean = 0.0, sum_rate_std = 0.0;
    double lifetime_mean = 0.0, lifetime_std = 0.0;
    double energy_rate_mean = 0.0, energy_rate_std = 0.0;
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    double sum_rate = 0.0;
    double lifetime = 0.0;
    double energy_rate = 0.0;
};

ModeStats summarize_mode(int mode, const std::vector<SeedOutcome>& outcomes);

// report.json body for a compare invocation: per-mode means, standard
// deviations and 95% confidence half-widths.
std::string compare_report_json(const std::vector<ModeStats>& stats);

}  // namespace skylease
