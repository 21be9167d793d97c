#include <benchmark/benchmark.h>

#include "sbmc/sampler.hpp"

namespace {

void BM_SweepDiscrete(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::DiscreteModes{{{1.0, 1.0}}});
    sbmc::McmcConfig cfg;
    cfg.T = 20.0;
    cfg.eps = 1.0;
    cfg.alpha = 0.3;
    cfg.lambda_run = 0.045;
    auto st = sbmc::make_initial_state(cfg, ks, 0);
    const int moves = cfg.resolved_sweep_moves();
    for (auto _ : state) {
        for (int i = 0; i < moves; ++i) sbmc::step(st, cfg, ks);
    }
    state.SetItemsProcessed(state.iterations() * moves);
}
BENCHMARK(BM_SweepDiscrete);

void BM_SweepPowerLaw(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::PowerLawExpCutoff{1.0, 2.0, 1.0});
    sbmc::McmcConfig cfg;
    cfg.T = 20.0;
    cfg.eps = 1.0;
    cfg.alpha = 0.4;
    cfg.lambda_run = 0.08;
    auto st = sbmc::make_initial_state(cfg, ks, 0);
    const int moves = cfg.resolved_sweep_moves();
    for (auto _ : state) {
        for (int i = 0; i < moves; ++i) sbmc::step(st, cfg, ks);
    }
    state.SetItemsProcessed(state.iterations() * moves);
}
BENCHMARK(BM_SweepPowerLaw);

void BM_Quadrant(benchmark::State& state) {
    const auto ks = sbmc::build_kernels(sbmc::DiscreteModes{{{1.0, 1.0}}});
    sbmc::McmcConfig cfg;
    cfg.T = 20.0;
    cfg.eps = 1.0;
    auto st = sbmc::make_initial_state(cfg, ks, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sbmc::quadrant(st.path, ks, 10.0));
    }
}
BENCHMARK(BM_Quadrant);

}  // namespace

BENCHMARK_MAIN();
