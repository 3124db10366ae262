#include <benchmark/benchmark.h>

#include "skylease/channel.hpp"
#include "skylease/config.hpp"
#include "skylease/engine.hpp"
#include "skylease/oracle.hpp"

using namespace skylease;

namespace {

const Scenario& bench_scenario() {
    static const Scenario sc = [] {
        ScenarioTemplate tmpl;
        tmpl.grid = GridSpec{32, 32, 8, 8};
        tmpl.n_uavs = 5;
        return random_scenario(12345, tmpl);
    }();
    return sc;
}

}  // namespace

static void BM_PrimaryRate(benchmark::State& state) {
    const Scenario& sc = bench_scenario();
    const Position3D pos = cell_to_position(sc.grid, 500);
    for (auto _ : state) benchmark::DoNotOptimize(primary_rate(pos, sc));
}
BENCHMARK(BM_PrimaryRate);

static void BM_SensingRate(benchmark::State& state) {
    const Scenario& sc = bench_scenario();
    const Position3D pos = cell_to_position(sc.grid, 500);
    for (auto _ : state) benchmark::DoNotOptimize(sensing_rate(pos, 0.25, sc));
}
BENCHMARK(BM_SensingRate);

static void BM_ChooseAction(benchmark::State& state) {
    const RegionShape shape{8, 8};
    QTable q(shape.cells());
    SplitMix64 rng(7);
    for (double& v : q.values()) v = rng.next_double();
    LearningParams p;
    int cell = 27;
    for (auto _ : state) {
        const Action a = choose_action(q, cell, shape, p, rng);
        cell = step_transition(shape, cell, a);
        benchmark::DoNotOptimize(cell);
    }
}
BENCHMARK(BM_ChooseAction);

static void BM_QUpdate(benchmark::State& state) {
    const RegionShape shape{8, 8};
    QTable q(shape.cells());
    LearningParams p;
    int s = 0;
    for (auto _ : state) {
        q_update(q, shape, s, Action::Stay, p.beta2, s, p);
        s = (s + 13) % shape.cells();
        benchmark::DoNotOptimize(q.values().data());
    }
}
BENCHMARK(BM_QUpdate);

static void BM_Allocation(benchmark::State& state) {
    const Scenario& sc = bench_scenario();
    for (auto _ : state) {
        const int primary = select_primary_region(sc);
        const RelayChoice relay = select_relay_uav(sc, primary);
        benchmark::DoNotOptimize(assign_sensing(sc, relay.uav, primary));
    }
}
BENCHMARK(BM_Allocation);

// Whole-episode throughput in agent-steps per second.
static void BM_EngineEpisode(benchmark::State& state) {
    SimConfig cfg = make_preset("table1-32x32-16regions", 99);
    cfg.run.runs = 1;
    cfg.run.episodes = 1;
    cfg.run.steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg.scenario, cfg.run, cfg.learning));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 5);
}
BENCHMARK(BM_EngineEpisode)->Arg(500)->Arg(2000);

static void BM_ValueIteration(benchmark::State& state) {
    const Scenario& sc = bench_scenario();
    const LearningParams p;
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::value_iteration(1, oracle::Role::Sensing, sc, p));
}
BENCHMARK(BM_ValueIteration);

BENCHMARK_MAIN();
