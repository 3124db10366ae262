// Command-line front end: run single experiments, compare modes over common
// seeds, replay exported Q-tables greedily, and verify library invariants
// against the brute-force oracles.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "skylease/channel.hpp"
#include "skylease/config.hpp"
#include "skylease/engine.hpp"
#include "skylease/errors.hpp"
#include "skylease/oracle.hpp"
#include "skylease/report.hpp"
#include "skylease/rng.hpp"

namespace fs = std::filesystem;
using namespace skylease;

namespace {

struct CommonOpts {
    std::string preset;
    std::string config_path;
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string out_dir = "out";
};

SimConfig resolve_config(const CommonOpts& opts) {
    if (!opts.preset.empty() && !opts.config_path.empty())
        throw ValidationError("give either --preset or --config, not both");
    if (!opts.preset.empty()) return make_preset(opts.preset, opts.seed);
    if (!opts.config_path.empty()) {
        SimConfig cfg = load_config(opts.config_path);
        if (opts.seed_given) cfg.run.master_seed = opts.seed;
        return cfg;
    }
    throw ValidationError("one of --preset or --config is required");
}

fs::path run_output_dir(const CommonOpts& opts, const SimConfig& cfg) {
    return fs::path(opts.out_dir) /
           (cfg.name + "-" + config_hash_hex(cfg) + "-s" + std::to_string(cfg.run.master_seed));
}

void write_run_artifacts(const fs::path& dir, const SimConfig& cfg, const RunResult& result,
                         bool dump_qtables, bool normalize) {
    fs::create_directories(dir);
    save_config(cfg, (dir / "config.json").string());
    write_text_file((dir / "metrics.csv").string(), metrics_csv(result));
    if (normalize)
        write_text_file((dir / "metrics_normalized.csv").string(), metrics_csv(result, true));
    write_text_file((dir / "allocation.json").string(), allocation_log_json(result));
    write_text_file((dir / "summary.json").string(), run_summary_json(cfg, result));
    if (dump_qtables) {
        fs::create_directories(dir / "qtables");
        for (int u = 0; u < result.n_uavs; ++u)
            write_text_file((dir / "qtables" / ("uav_" + std::to_string(u) + ".qt")).string(),
                            qtable_to_text(result.final_qtables[u]));
    }
}

struct CheckReport {
    int failures = 0;
    void report(const std::string& name, bool ok, const std::string& detail = "") {
        std::printf("[%s] %s%s%s\n", ok ? " OK " : "FAIL", name.c_str(),
                    detail.empty() ? "" : ": ", detail.c_str());
        if (!ok) ++failures;
    }
};

int run_verify_suite(const SimConfig& cfg) {
    CheckReport rep;

    bool params_ok = true;
    std::string params_msg;
    try {
        cfg.learning.validate();
        cfg.run.validate();
    } catch (const ValidationError& e) {
        params_ok = false;
        params_msg = e.what();
    }
    rep.report("learning-params-ordering", params_ok, params_msg);

    bool scenario_ok = true;
    std::string scenario_msg;
    try {
        build_scenario(cfg.scenario.grid, cfg.scenario.nodes, cfg.scenario.phys,
                       cfg.scenario.priorities);
    } catch (const ValidationError& e) {
        scenario_ok = false;
        scenario_msg = e.what();
    }
    rep.report("scenario-validation", scenario_ok, scenario_msg);

    // Q-value boundedness holds for any finite rewards, ordered or not.
    {
        LearningParams p = cfg.learning;
        const double bound = p.q_bound() * (1.0 + 1e-12);
        QTable q(9);
        const RegionShape shape{3, 3};
        SplitMix64 rng(7);
        bool ok = true;
        for (int i = 0; i < 100000 && ok; ++i) {
            const int s = static_cast<int>(rng.next_below(9));
            int cnt = 0;
            const auto legal = legal_actions(shape, s, &cnt);
            const Action a = legal[rng.next_below(static_cast<std::uint32_t>(cnt))];
            const double rewards[3] = {p.beta1, p.beta2, p.beta3};
            q_update(q, shape, s, a, rewards[rng.next_below(3)],
                     step_transition(shape, s, a), p);
            for (double v : q.values())
                if (std::abs(v) > bound) ok = false;
        }
        rep.report("q-boundedness", ok);
    }

    if (!scenario_ok) {
        std::printf("[ABRT] scenario invalid, oracle and engine checks skipped\n");
        return 1;
    }

    try {
        const Scenario& sc = cfg.scenario;

        {
            bool ok = true;
            ScenarioTemplate tmpl{sc.grid, sc.phys, sc.num_uavs()};
            for (int i = 0; i < 200 && ok; ++i) {
                const Scenario rnd = random_scenario(1000 + i, tmpl);
                const int p = select_primary_region(rnd);
                ok = select_relay_uav(rnd, p).uav == oracle::exhaustive_relay_argmax(rnd, p);
            }
            rep.report("relay-selection-exactness", ok);
        }

        {
            bool ok = true;
            ScenarioTemplate tmpl{sc.grid, sc.phys, std::min(sc.num_uavs(), 6)};
            for (int i = 0; i < 100 && ok; ++i) {
                const Scenario rnd = random_scenario(5000 + i, tmpl);
                const int p = select_primary_region(rnd);
                const RelayChoice relay = select_relay_uav(rnd, p);
                const Allocation got = assign_sensing(rnd, relay.uav, p);
                std::vector<int> uavs;
                for (int u = 0; u < rnd.num_uavs(); ++u)
                    if (u != relay.uav) uavs.push_back(u);
                ok = got.sensing_assignment ==
                     oracle::exhaustive_matching(uavs, sensing_region_pool(rnd, p), rnd);
            }
            rep.report("matching-validity", ok);
        }

        {
            SimConfig small = cfg;
            small.run.runs = 2;
            small.run.episodes = 5;
            small.run.steps = std::min(small.run.steps, 60);
            small.run.lifetime_mode = false;
            const RunResult r = run(small.scenario, small.run, small.learning);
            bool ok = true;
            for (int run_i = 0; run_i < r.runs && ok; ++run_i)
                for (int ep = 0; ep < r.episodes && ok; ++ep)
                    for (int u = 0; u < r.n_uavs && ok; ++u) {
                        const EpisodeMetrics& m = r.at(run_i, ep, u);
                        const double spent =
                            m.movement_count * small.scenario.phys.psi_move +
                            small.run.steps * small.scenario.phys.psi_tx;
                        ok = r.missions[run_i].agents[u].post_flight_energy - m.final_energy ==
                             spent;
                    }
            rep.report("energy-ledger", ok);

            // Engine rate fields must agree with the channel formulas.
            bool xok = true;
            const MissionPlan& mission = r.missions.front();
            for (const AgentPlan& a : mission.agents) {
                const auto cells_g = cells_of(sc.grid, a.region);
                for (std::size_t i = 0; i < cells_g.size() && xok; i += 3) {
                    const Position3D pos = cell_to_position(sc.grid, cells_g[i]);
                    const double want =
                        a.role == UavRole::Relay
                            ? primary_rate(pos, sc)
                            : (a.lambda > 0.0 ? sensing_rate(pos, a.lambda, sc) : 0.0);
                    xok = a.rate_by_cell[i] == want;
                }
            }
            rep.report("channel-cross-check", xok);

            double lambda_sum = 0.0;
            for (const AgentPlan& a : mission.agents) lambda_sum += a.lambda;
            rep.report("time-share-budget", lambda_sum <= 1.0 + 1e-12);
        }

        if (sc.grid.states_per_region() <= 81) {
            bool ok = true;
            const LearningParams p = cfg.learning;
            for (int region = 0; region < sc.grid.num_regions() && ok; ++region) {
                for (oracle::Role role : {oracle::Role::Sensing, oracle::Role::Relay}) {
                    const auto vi = oracle::value_iteration(region, role, sc, p);
                    const RegionShape shape{sc.grid.region_r1, sc.grid.region_r2};
                    const int entry = (sc.grid.region_r2 / 2) * sc.grid.region_r1 +
                                      sc.grid.region_r1 / 2;
                    const int absorb = greedy_absorbing_cell(vi.q_star, shape, entry);
                    ok = absorb == oracle::best_cell(region, role, sc).local_cell;
                    if (!ok) break;
                }
            }
            rep.report("oracle-policy-agreement", ok);
        } else {
            rep.report("oracle-policy-agreement", true, "skipped (region above 9x9 guard)");
        }
    } catch (const InfeasibleError& e) {
        std::printf("[ABRT] allocator infeasibility: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::printf("[ABRT] invalid configuration: %s\n", e.what());
        return 1;
    }

    return rep.failures == 0 ? 0 : 1;
}

int cmd_run(const CommonOpts& opts, const SimConfig& cfg, bool dump_qtables, bool normalize,
            bool verify_first) {
    cfg.validate();
    if (verify_first) {
        const int rc = run_verify_suite(cfg);
        if (rc != 0) return rc;
    }
    const RunResult result = cfg.run.lifetime_mode
                                 ? lifetime_run(cfg.scenario, cfg.run, cfg.learning)
                                 : run(cfg.scenario, cfg.run, cfg.learning);
    const fs::path dir = run_output_dir(opts, cfg);
    write_run_artifacts(dir, cfg, result, dump_qtables, normalize);

    if (cfg.run.lifetime_mode)
        std::printf("mode=%d seed=%llu final_episode_sum_rate=%.6g relay_lifetime=%.0f -> %s\n",
                    cfg.run.mode, static_cast<unsigned long long>(cfg.run.master_seed),
                    final_window_sum_rate(result, 1), final_episode_relay_lifetime(result),
                    dir.string().c_str());
    else
        std::printf("mode=%d seed=%llu final_episode_sum_rate=%.6g -> %s\n", cfg.run.mode,
                    static_cast<unsigned long long>(cfg.run.master_seed),
                    final_window_sum_rate(result, 1), dir.string().c_str());
    return 0;
}

int cmd_compare(const CommonOpts& opts, const std::vector<int>& modes, int seeds,
                const SimConfig& base, bool regen_scenario_per_seed) {
    if (modes.empty()) throw ValidationError("compare: at least one mode required");

    struct Task {
        int mode;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int m : modes)
        for (int s = 0; s < seeds; ++s) tasks.push_back({m, opts.seed + s});

    struct Cell {
        SeedOutcome outcome;
        std::string long_rows;
    };
    std::vector<Cell> cells(tasks.size());

    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            SimConfig cfg = regen_scenario_per_seed ? make_preset(base.name, t.seed) : base;
            if (!regen_scenario_per_seed) cfg.run.master_seed = t.seed;
            cfg.run.mode = t.mode;
            cfg.run.lifetime_mode = base.run.lifetime_mode;
            cfg.run.runs = base.run.runs;
            cfg.run.episodes = base.run.episodes;
            cfg.run.steps = base.run.steps;
            const RunResult r = cfg.run.lifetime_mode
                                    ? lifetime_run(cfg.scenario, cfg.run, cfg.learning)
                                    : run(cfg.scenario, cfg.run, cfg.learning);
            Cell& cell = cells[i];
            cell.outcome.seed = t.seed;
            cell.outcome.sum_rate = final_window_sum_rate(r, 5);
            cell.outcome.lifetime =
                cfg.run.lifetime_mode ? final_episode_relay_lifetime(r) : 0.0;
            cell.outcome.energy_rate = final_window_energy_rate(r, 5);
            for (int run_i = 0; run_i < r.runs; ++run_i) {
                const int relay = r.missions[run_i].relay_uav;
                for (int ep = 0; ep < r.episodes; ++ep) {
                    double rate = 0.0, erate = 0.0;
                    for (int u = 0; u < r.n_uavs; ++u) {
                        rate += r.at(run_i, ep, u).sum_throughput;
                        erate += r.at(run_i, ep, u).energy_consumption_rate;
                    }
                    char buf[160];
                    std::snprintf(buf, sizeof(buf), "%d,%llu,%d,%d,%.17g,%ld,%.17g\n", t.mode,
                                  static_cast<unsigned long long>(t.seed), run_i, ep, rate,
                                  r.at(run_i, ep, relay).lifetime_transmissions,
                                  erate / r.n_uavs);
                    cell.long_rows += buf;
                }
            }
        }
    };

    const unsigned n_threads =
        std::max(1u, std::min(std::thread::hardware_concurrency(),
                              static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::string long_csv = "mode,seed,run,episode,sum_rate,relay_lifetime_tx,mean_energy_rate\n";
    std::vector<ModeStats> stats;
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        std::vector<SeedOutcome> outcomes;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].mode != modes[mi]) continue;
            outcomes.push_back(cells[i].outcome);
            long_csv += cells[i].long_rows;
        }
        stats.push_back(summarize_mode(modes[mi], outcomes));
    }

    const fs::path dir =
        fs::path(opts.out_dir) / ("compare-" + base.name + "-" + config_hash_hex(base));
    fs::create_directories(dir);
    write_text_file((dir / "long.csv").string(), long_csv);
    write_text_file((dir / "report.json").string(), compare_report_json(stats));

    for (const ModeStats& s : stats) {
        std::printf("mode=%d seeds=%d sum_rate=%.6g+/-%.3g", s.mode, s.seeds, s.sum_rate_mean,
                    s.sum_rate_std);
        if (base.run.lifetime_mode)
            std::printf(" relay_lifetime=%.1f+/-%.1f", s.lifetime_mean, s.lifetime_std);
        std::printf(" energy_rate=%.4g+/-%.2g\n", s.energy_rate_mean, s.energy_rate_std);
    }
    std::printf("-> %s\n", dir.string().c_str());
    return 0;
}

int cmd_replay(const std::string& from_dir, int steps_override, std::uint64_t seed,
               bool seed_given) {
    const fs::path dir(from_dir);
    SimConfig cfg = load_config((dir / "config.json").string());
    const int steps = steps_override > 0 ? steps_override : cfg.run.steps;
    const std::uint64_t replay_seed = seed_given ? seed : cfg.run.master_seed;

    // The mission of the final run is reproducible from the config.
    const MissionPlan plan =
        plan_mission(cfg.scenario, cfg.run.mode, cfg.run.master_seed, cfg.run.runs - 1);
    const RegionShape shape{cfg.scenario.grid.region_r1, cfg.scenario.grid.region_r2};

    std::vector<QTable> tables;
    for (int u = 0; u < cfg.scenario.num_uavs(); ++u) {
        const fs::path qpath = dir / "qtables" / ("uav_" + std::to_string(u) + ".qt");
        tables.push_back(qtable_from_text(read_text_file(qpath.string()), shape.cells()));
    }

    LearningParams greedy = cfg.learning;
    greedy.epsilon = 0.0;

    std::string csv = "step,uav,role,region,cell,rate\n";
    std::vector<int> cell(cfg.scenario.num_uavs());
    std::vector<SplitMix64> streams;
    for (int u = 0; u < cfg.scenario.num_uavs(); ++u) {
        cell[u] = plan.agents[u].entry_cell;
        streams.emplace_back(mix_seed(replay_seed, stream_tag::replay,
                                      static_cast<std::uint64_t>(u)));
    }
    for (int step = 0; step < steps; ++step) {
        for (int u = 0; u < cfg.scenario.num_uavs(); ++u) {
            const Action a = choose_action(tables[u], cell[u], shape, greedy, streams[u]);
            cell[u] = step_transition(shape, cell[u], a);
            char buf[120];
            std::snprintf(buf, sizeof(buf), "%d,%d,%s,%d,%d,%.17g\n", step, u,
                          plan.agents[u].role == UavRole::Relay ? "relay" : "sensing",
                          plan.agents[u].region, cell[u],
                          plan.agents[u].rate_by_cell[cell[u]]);
            csv += buf;
        }
    }
    write_text_file((dir / "trajectory.csv").string(), csv);
    std::printf("replayed %d steps -> %s\n", steps, (dir / "trajectory.csv").string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cooperative spectrum-leasing UAV fleet simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    int mode = -1, episodes = -1, steps = -1, runs = -1, seeds = 20;
    bool lifetime = false, dump_qtables = false, normalize = false, verify_flag = false;
    std::vector<int> modes;
    std::string from_dir;
    int replay_steps = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--preset", opts.preset, "bundled preset name");
        cmd->add_option("--config", opts.config_path, "config JSON path");
        cmd->add_option("--seed", opts.seed, "scenario + master seed")
            ->each([&](const std::string&) { opts.seed_given = true; });
        cmd->add_option("--out", opts.out_dir, "output directory root");
    };
    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "mode 0..4");
        cmd->add_option("--episodes", episodes, "episodes per run");
        cmd->add_option("--steps", steps, "steps per episode");
        cmd->add_option("--runs", runs, "independent runs");
        cmd->add_flag("--lifetime", lifetime, "unbounded episodes until depletion");
    };

    CLI::App* c_run = app.add_subcommand("run", "execute one experiment");
    add_common(c_run);
    add_overrides(c_run);
    c_run->add_flag("--dump-qtables", dump_qtables, "export final Q-tables");
    c_run->add_flag("--normalize", normalize, "also write per-UAV min-max normalized rates");
    c_run->add_flag("--verify", verify_flag, "run the invariant suite first");

    CLI::App* c_cmp = app.add_subcommand("compare", "run several modes on common seeds");
    add_common(c_cmp);
    add_overrides(c_cmp);
    c_cmp->add_option("--modes", modes, "modes to compare")->delimiter(',');
    c_cmp->add_option("--seeds", seeds, "number of consecutive seeds");

    CLI::App* c_rep = app.add_subcommand("replay", "greedy replay of exported Q-tables");
    c_rep->add_option("--from", from_dir, "run output directory")->required();
    c_rep->add_option("--steps", replay_steps, "steps to replay");
    c_rep->add_option("--seed", opts.seed, "tie-break stream seed")
        ->each([&](const std::string&) { opts.seed_given = true; });

    CLI::App* c_ver = app.add_subcommand("verify", "invariant and oracle checks");
    add_common(c_ver);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_rep))
            return cmd_replay(from_dir, replay_steps, opts.seed, opts.seed_given);

        SimConfig cfg = resolve_config(opts);
        if (mode >= 0) cfg.run.mode = mode;
        if (episodes >= 0) cfg.run.episodes = episodes;
        if (steps >= 0) cfg.run.steps = steps;
        if (runs >= 0) cfg.run.runs = runs;
        if (lifetime) cfg.run.lifetime_mode = true;

        if (app.got_subcommand(c_ver)) return run_verify_suite(cfg);
        if (app.got_subcommand(c_cmp)) {
            if (modes.empty()) modes = {0, 1, 2, 3, 4};
            cfg.validate();
            return cmd_compare(opts, modes, seeds, cfg, !opts.preset.empty());
        }
        return cmd_run(opts, cfg, dump_qtables, normalize, verify_flag);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
