#include <benchmark/benchmark.h>

#include "sbmc/kernels.hpp"
#include "sbmc/path.hpp"
#include "sbmc/rng.hpp"

namespace {

sbmc::SpinPath make_path(int n, double T) {
    sbmc::Rng rng(1, 0);
    sbmc::SpinPath p;
    p.T = T;
    p.v = 1;
    for (int i = 0; i < n; ++i) p.jumps.push_back(rng.uniform(-T, T));
    std::sort(p.jumps.begin(), p.jumps.end());
    return p;
}

void BM_U2PowerLaw(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::PowerLawExpCutoff{1.0, 2.0, 1.0});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks.u2(t));
        t += 0.01;
        if (t > 40.0) t = 0.0;
    }
}
BENCHMARK(BM_U2PowerLaw);

void BM_U2Discrete(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::DiscreteModes{{{1.0, 1.0}}});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ks.u2(t));
        t += 0.01;
        if (t > 40.0) t = 0.0;
    }
}
BENCHMARK(BM_U2Discrete);

void BM_PairAction(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::PowerLawExpCutoff{1.0, 2.0, 1.0});
    const auto p = make_path(static_cast<int>(state.range(0)), 20.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sbmc::pair_action(p, ks));
    }
}
BENCHMARK(BM_PairAction)->Arg(20)->Arg(50)->Arg(100);

void BM_DeltaSuffixPowerLaw(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::PowerLawExpCutoff{1.0, 2.0, 1.0});
    const auto p = make_path(static_cast<int>(state.range(0)), 20.0);
    double u = -19.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sbmc::delta_action_flip(p, ks, u, p.T));
        u += 0.37;
        if (u > 19.0) u = -19.0;
    }
}
BENCHMARK(BM_DeltaSuffixPowerLaw)->Arg(20)->Arg(50)->Arg(100);

void BM_DeltaSuffixDiscrete(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::DiscreteModes{{{1.0, 1.0}}});
    const auto p = make_path(static_cast<int>(state.range(0)), 20.0);
    double u = -19.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sbmc::delta_action_flip(p, ks, u, p.T));
        u += 0.37;
        if (u > 19.0) u = -19.0;
    }
}
BENCHMARK(BM_DeltaSuffixDiscrete)->Arg(20)->Arg(50)->Arg(100);

}  // namespace
