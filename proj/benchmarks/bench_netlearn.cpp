#include <benchmark/benchmark.h>

#include <vector>

#include "netlearn/bound.h"
#include "netlearn/exact.h"
#include "netlearn/sim.h"
#include "netlearn/stats.h"

namespace {

using namespace netlearn;

void BM_naive_curve(benchmark::State& state) {
    const NetworkParams net{0.75, static_cast<int>(state.range(0))};
    const SignalParams sig;
    for (auto _ : state) {
        auto curve = naive_accuracy_curve(net, sig, EllVariant::truncated_mean,
                                          ChoiceVariant::derived_argument);
        benchmark::DoNotOptimize(curve);
    }
}
BENCHMARK(BM_naive_curve)->Arg(40)->Arg(80)->Arg(160);

void BM_bound_curve(benchmark::State& state) {
    const NetworkParams net{0.75, static_cast<int>(state.range(0))};
    const SignalParams sig;
    for (auto _ : state) {
        auto curve = constrained_accuracy_curve(net, sig);
        benchmark::DoNotOptimize(curve);
    }
}
BENCHMARK(BM_bound_curve)->Arg(40)->Arg(160);

void BM_run_trial(benchmark::State& state) {
    TrialConfig cfg;
    cfg.topology = SequentialTopology{NetworkParams{0.75, 40}};
    std::uint64_t i = 0;
    for (auto _ : state) {
        auto rec = run_trial(cfg, trial_seed(42, i), i);
        benchmark::DoNotOptimize(rec);
        ++i;
    }
}
BENCHMARK(BM_run_trial);

void BM_run_batch(benchmark::State& state) {
    TrialConfig cfg;
    cfg.topology = SequentialTopology{NetworkParams{0.25, 40}};
    const int parallelism = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto sum = run_batch(cfg, 4096, 42, parallelism);
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_run_batch)->Arg(1)->Arg(8);

void BM_ols_robust(benchmark::State& state) {
    const int n = 260;
    std::vector<double> y(n), ones(n, 1.0), q(n);
    SplitMix64 rng(7);
    for (int i = 0; i < n; ++i) {
        q[i] = i % 2 ? 0.75 : 0.25;
        y[i] = 0.8 - 0.09 * q[i] + 0.05 * rng.gaussian();
    }
    for (auto _ : state) {
        auto fit = ols_robust(y, {ones, q}, {"const", "network_density"});
        benchmark::DoNotOptimize(fit);
    }
}
BENCHMARK(BM_ols_robust);

}  // namespace

BENCHMARK_MAIN();
