#include <benchmark/benchmark.h>

#include "aoi/analytic.hpp"
#include "aoi/optimize.hpp"
#include "aoi/sim.hpp"

namespace {

aoi::SystemParams params() {
  return aoi::SystemParams{aoi::LinkConfig(100, 118, 3.0), 0.01,
                           aoi::PenaltyShape::exponential(0.002, 10.0)};
}

void BM_Evaluate(benchmark::State& state) {
  const auto s = static_cast<aoi::StrategyKind>(state.range(0));
  const auto p = params();
  for (auto _ : state) benchmark::DoNotOptimize(aoi::evaluate(s, p).value);
  state.SetLabel(std::string(aoi::to_string(s)));
}
BENCHMARK(BM_Evaluate)->DenseRange(0, 2);

void BM_LinearLimit(benchmark::State& state) {
  auto p = params();
  p.shape = aoi::PenaltyShape::linear();
  for (auto _ : state) benchmark::DoNotOptimize(aoi::linear_limit(aoi::StrategyKind::Npob, p));
}
BENCHMARK(BM_LinearLimit);

void BM_OptimalBlocklength(benchmark::State& state) {
  aoi::SearchSpec spec{.objective_strategy = aoi::StrategyKind::Npob, .base = params()};
  for (auto _ : state) benchmark::DoNotOptimize(aoi::optimal_blocklength(spec).blocklength);
  state.SetItemsProcessed(state.iterations() * (spec.resolved_m_max() - spec.m_min + 1));
}
BENCHMARK(BM_OptimalBlocklength);

void BM_Simulate(benchmark::State& state) {
  const auto s = static_cast<aoi::StrategyKind>(state.range(0));
  aoi::SimConfig cfg{.params = params()};
  cfg.horizon = 1e6;
  std::uint64_t cycles = 0;
  for (auto _ : state) {
    const auto r = aoi::run_replication(cfg, s, 0);
    cycles += r.cycles;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(cycles));
  state.SetLabel(std::string(aoi::to_string(s)));
}
BENCHMARK(BM_Simulate)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
