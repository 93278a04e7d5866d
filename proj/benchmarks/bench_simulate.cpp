#include <benchmark/benchmark.h>

#include "evfreq/metrics.hpp"
#include "evfreq/simulator.hpp"

using namespace evfreq;

static void BM_SimulateDefault(benchmark::State& state) {
    Scenario s;
    s.controller.mode = ControlMode::V2G;
    s.controller.participation = 1.0;
    s.step_s = 0.01 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(s));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.step_count()));
}
BENCHMARK(BM_SimulateDefault)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Metrics(benchmark::State& state) {
    const Trajectory t = simulate(Scenario{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_metrics(t));
    }
}
BENCHMARK(BM_Metrics)->Unit(benchmark::kMicrosecond);

static void BM_Sweep30(benchmark::State& state) {
    const std::vector<double> levels{0.2, 0.4, 0.6, 0.8, 1.0};
    const std::vector<ControlMode> modes{ControlMode::V1G, ControlMode::V2G};
    const ParallelOptions par{static_cast<unsigned>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(participation_sweep(Scenario{}, levels, modes, {}, kAllStrategies, par));
    }
}
BENCHMARK(BM_Sweep30)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
