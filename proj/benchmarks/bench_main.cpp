#include <benchmark/benchmark.h>

#include "edgeib/numerics.hpp"
#include "edgeib/simulator.hpp"

using namespace edgeib;

namespace {

void BM_LambertW(benchmark::State& state) {
    double x = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambert_w0(x));
        x = x < 1e8 ? x * 1.7 : 1e-3;
    }
}
BENCHMARK(BM_LambertW);

void BM_SolveGib(benchmark::State& state) {
    const int d_x = static_cast<int>(state.range(0));
    const GaussianSource src = make_synthetic_source(d_x, 8, 1.0, 5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_gib(src));
    state.SetComplexityN(d_x);
}
BENCHMARK(BM_SolveGib)->Arg(32)->Arg(128)->Arg(256)->Complexity();

void BM_OperatingPoint(benchmark::State& state) {
    const GaussianSource src = make_synthetic_source(256, 8, 1.0, 5);
    const GibSolution sol = solve_gib(src);
    double beta = 1.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(operating_point(sol, beta));
        beta = beta < 100.0 ? beta * 1.3 : 1.01;
    }
}
BENCHMARK(BM_OperatingPoint);

Scenario bench_scenario(long horizon) {
    Scenario sc;
    sc.sources.push_back(make_synthetic_source(128, 8, 1.0, 5));
    for (int k = 0; k < 5; ++k) {
        DeviceConfig dev;
        dev.id = k;
        dev.distance = 5.0 + 36.0 * k;
        dev.beta_grid = {0.95, 1.02, 1.05, 1.1, 1.3, 2.0};
        dev.C_d_per_dt = 128.0;
        dev.C_s_per_dt = 8.0;
        dev.L_avg = 0.05;
        dev.G_avg = 0.35;
        sc.devices.push_back(dev);
    }
    sc.horizon = horizon;
    sc.seed = 11;
    return sc;
}

void BM_PerSlotDecision(benchmark::State& state) {
    const Scenario sc = bench_scenario(1);
    const GibSolution sol = solve_gib(sc.sources[0]);
    const GibAccuracyModel acc(sol);
    std::vector<DeviceMenu> menus;
    for (const auto& dev : sc.devices) menus.push_back(make_device_menu(sol, dev, acc));

    VirtualQueues q = VirtualQueues::zeros(5);
    for (int k = 0; k < 5; ++k) {
        q.Z[k] = 0.01 * (k + 1);
        q.S[k] = 0.5 * (k + 1);
    }
    std::vector<double> gains(5);
    for (int k = 0; k < 5; ++k) gains[k] = channel_gain(sc.channel, sc.devices[k].distance, 3, k);

    for (auto _ : state)
        benchmark::DoNotOptimize(
            per_slot_decision(q, gains, menus, sc.devices, sc.server, sc.ctrl));
}
BENCHMARK(BM_PerSlotDecision);

void BM_ClosedLoopRun(benchmark::State& state) {
    const Scenario sc = bench_scenario(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run(sc));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClosedLoopRun)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
