#include "skylease/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "skylease/errors.hpp"

namespace skylease {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string metrics_csv(const RunResult& result, bool normalize) {
    std::string out =
        "run,episode,uav,role,region,sum_rate,cum_reward,moves,lifetime_tx,"
        "energy_rate,final_energy\n";
    for (int run_i = 0; run_i < result.runs; ++run_i) {
        const MissionPlan& mission = result.missions[run_i];
        std::vector<double> lo(result.n_uavs, 0.0), hi(result.n_uavs, 0.0);
        if (normalize) {
            for (int u = 0; u < result.n_uavs; ++u) {
                double mn = result.at(run_i, 0, u).sum_throughput;
                double mx = mn;
                for (int ep = 1; ep < result.episodes; ++ep) {
                    const double v = result.at(run_i, ep, u).sum_throughput;
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                lo[u] = mn;
                hi[u] = mx;
            }
        }
        for (int ep = 0; ep < result.episodes; ++ep) {
            for (int u = 0; u < result.n_uavs; ++u) {
                const EpisodeMetrics& m = result.at(run_i, ep, u);
                double rate = m.sum_throughput;
                if (normalize)
                    rate = hi[u] > lo[u] ? (rate - lo[u]) / (hi[u] - lo[u]) : 0.0;
                out += std::to_string(run_i);
                out += ',';
                out += std::to_string(ep);
                out += ',';
                out += std::to_string(u);
                out += ',';
                out += mission.agents[u].role == UavRole::Relay ? "relay" : "sensing";
                out += ',';
                out += std::to_string(mission.agents[u].region);
                out += ',';
                out += fmt(rate);
                out += ',';
                out += fmt(m.cumulative_reward);
                out += ',';
                out += std::to_string(m.movement_count);
                out += ',';
                out += std::to_string(m.lifetime_transmissions);
                out += ',';
                out += fmt(m.energy_consumption_rate);
                out += ',';
                out += fmt(m.final_energy);
                out += '\n';
            }
        }
    }
    return out;
}

std::string allocation_log_json(const RunResult& result) {
    json runs = json::array();
    for (int run_i = 0; run_i < result.runs; ++run_i) {
        const MissionPlan& mission = result.missions[run_i];
        json uavs = json::array();
        for (const AgentPlan& a : mission.agents) {
            uavs.push_back(json{{"uav", a.uav},
                                {"role", a.role == UavRole::Relay ? "relay" : "sensing"},
                                {"region", a.region},
                                {"lambda", a.lambda},
                                {"flight_hops", a.flight_hops},
                                {"post_flight_energy", a.post_flight_energy}});
        }
        runs.push_back(json{{"run", run_i},
                            {"primary_region", mission.primary_region},
                            {"relay_uav", mission.relay_uav},
                            {"uavs", uavs}});
    }
    json realloc = json::array();
    for (const auto& ev : result.reallocations)
        realloc.push_back(
            json{{"run", ev.run}, {"episode", ev.episode}, {"signal", ev.signal}});
    return json{{"runs", runs}, {"reallocations", realloc}}.dump(2) + "\n";
}

std::string run_summary_json(const SimConfig& cfg, const RunResult& result) {
    json j;
    j["name"] = cfg.name;
    j["config_hash"] = config_hash_hex(cfg);
    j["mode"] = cfg.run.mode;
    j["master_seed"] = cfg.run.master_seed;
    j["lifetime_mode"] = cfg.run.lifetime_mode;
    j["final_episode_sum_rate"] = final_window_sum_rate(result, 1);
    j["final_5_episode_sum_rate"] = final_window_sum_rate(result, 5);
    if (cfg.run.lifetime_mode)
        j["relay_lifetime"] = final_episode_relay_lifetime(result);
    j["mean_energy_rate"] = mean_energy_rate(result);
    j["reward_gap_moves"] = result.reward_gap_moves;

    // Per-episode fleet totals averaged over runs, for quick plotting.
    json per_episode = json::array();
    for (int ep = 0; ep < result.episodes; ++ep) {
        double rate = 0.0, moves = 0.0;
        for (int run_i = 0; run_i < result.runs; ++run_i) {
            for (int u = 0; u < result.n_uavs; ++u) {
                rate += result.at(run_i, ep, u).sum_throughput;
                moves += result.at(run_i, ep, u).movement_count;
            }
        }
        per_episode.push_back(json{{"episode", ep},
                                   {"sum_rate", rate / result.runs},
                                   {"movements", moves / result.runs}});
    }
    j["per_episode"] = per_episode;
    return j.dump(2) + "\n";
}

std::string qtable_to_text(const QTable& q) {
    std::string out;
    for (int s = 0; s < q.states(); ++s) {
        for (int a = 0; a < kNumActions; ++a) {
            if (a) out += ' ';
            out += fmt(q.at(s, a));
        }
        out += '\n';
    }
    return out;
}

QTable qtable_from_text(const std::string& text, int expected_states) {
    std::istringstream in(text);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != expected_states * kNumActions)
        throw ValidationError("qtable: shape mismatch, expected " +
                              std::to_string(expected_states * kNumActions) +
                              " values, got " + std::to_string(values.size()));
    QTable q(expected_states);
    q.values() = values;
    return q;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double final_window_sum_rate(const RunResult& result, int window) {
    const int w = std::min(window, result.episodes);
    double total = 0.0;
    for (int run_i = 0; run_i < result.runs; ++run_i) {
        double acc = 0.0;
        for (int ep = result.episodes - w; ep < result.episodes; ++ep)
            for (int u = 0; u < result.n_uavs; ++u)
                acc += result.at(run_i, ep, u).sum_throughput;
        total += acc / w;
    }
    return total / result.runs;
}

double final_episode_relay_lifetime(const RunResult& result) {
    double total = 0.0;
    for (int run_i = 0; run_i < result.runs; ++run_i) {
        const int relay = result.missions[run_i].relay_uav;
        total += static_cast<double>(
            result.at(run_i, result.episodes - 1, relay).lifetime_transmissions);
    }
    return total / result.runs;
}

double mean_energy_rate(const RunResult& result) {
    double total = 0.0;
    long count = 0;
    for (int run_i = 0; run_i < result.runs; ++run_i)
        for (int ep = 0; ep < result.episodes; ++ep)
            for (int u = 0; u < result.n_uavs; ++u) {
                total += result.at(run_i, ep, u).energy_consumption_rate;
                ++count;
            }
    return count ? total / count : 0.0;
}

double final_window_energy_rate(const RunResult& result, int window) {
    const int w = std::min(window, result.episodes);
    double total = 0.0;
    long count = 0;
    for (int run_i = 0; run_i < result.runs; ++run_i)
        for (int ep = result.episodes - w; ep < result.episodes; ++ep)
            for (int u = 0; u < result.n_uavs; ++u) {
                total += result.at(run_i, ep, u).energy_consumption_rate;
                ++count;
            }
    return count ? total / count : 0.0;
}

ModeStats summarize_mode(int mode, const std::vector<SeedOutcome>& outcomes) {
    ModeStats s;
    s.mode = mode;
    s.seeds = static_cast<int>(outcomes.size());
    if (outcomes.empty()) return s;
    auto reduce = [&](auto field, double& mean, double& stddev) {
        double m = 0.0;
        for (const auto& o : outcomes) m += field(o);
        m /= outcomes.size();
        double var = 0.0;
        for (const auto& o : outcomes) {
            const double d = field(o) - m;
            var += d * d;
        }
        mean = m;
        stddev = outcomes.size() > 1 ? std::sqrt(var / (outcomes.size() - 1)) : 0.0;
    };
    reduce([](const SeedOutcome& o) { return o.sum_rate; }, s.sum_rate_mean, s.sum_rate_std);
    reduce([](const SeedOutcome& o) { return o.lifetime; }, s.lifetime_mean, s.lifetime_std);
    reduce([](const SeedOutcome& o) { return o.energy_rate; }, s.energy_rate_mean,
           s.energy_rate_std);
    return s;
}

std::string compare_report_json(const std::vector<ModeStats>& stats) {
    json modes = json::array();
    for (const auto& s : stats) {
        const double ci = s.seeds > 1 ? 1.96 / std::sqrt(static_cast<double>(s.seeds)) : 0.0;
        modes.push_back(json{{"mode", s.mode},
                             {"seeds", s.seeds},
                             {"final_5_episode_sum_rate",
                              json{{"mean", s.sum_rate_mean},
                                   {"std", s.sum_rate_std},
                                   {"ci95", ci * s.sum_rate_std}}},
                             {"relay_lifetime",
                              json{{"mean", s.lifetime_mean},
                                   {"std", s.lifetime_std},
                                   {"ci95", ci * s.lifetime_std}}},
                             {"energy_rate",
                              json{{"mean", s.energy_rate_mean},
                                   {"std", s.energy_rate_std},
                                   {"ci95", ci * s.energy_rate_std}}}});
    }
    return json{{"modes", modes}}.dump(2) + "\n";
}

}  // namespace skylease
