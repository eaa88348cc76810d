#include <benchmark/benchmark.h>

#include <bellforge/catalog.hpp>
#include <bellforge/local.hpp>
#include <bellforge/npa.hpp>
#include <bellforge/optimize.hpp>
#include <bellforge/quantum.hpp>

using namespace bellforge;

static void BM_BornCorrelation(benchmark::State& state) {
  const auto s = strategy_j42();
  for (auto _ : state) benchmark::DoNotOptimize(born_correlation(s));
}
BENCHMARK(BM_BornCorrelation);

static void BM_LocalBoundChsh(benchmark::State& state) {
  const auto f = chsh().functional;
  for (auto _ : state) benchmark::DoNotOptimize(local_bound(f));
}
BENCHMARK(BM_LocalBoundChsh);

static void BM_LocalBoundI9(benchmark::State& state) {
  const auto f = i9().functional;
  for (auto _ : state) benchmark::DoNotOptimize(local_bound(f));
}
BENCHMARK(BM_LocalBoundI9);

static void BM_BellOperatorCglmp(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto f = i22dd(d).functional;
  const auto meas = cglmp_optimal_measurements(d);
  for (auto _ : state) benchmark::DoNotOptimize(bell_operator(f, meas, meas));
}
BENCHMARK(BM_BellOperatorCglmp)->Arg(3)->Arg(8)->Arg(19);

static void BM_NpaChshLevel1(benchmark::State& state) {
  const auto f = chsh().functional;
  for (auto _ : state) benchmark::DoNotOptimize(npa_upper_bound(f, NpaLevel::level1));
}
BENCHMARK(BM_NpaChshLevel1);

static void BM_NpaIsLevel2(benchmark::State& state) {
  const auto f = i_s(2.0).functional;
  for (auto _ : state) benchmark::DoNotOptimize(npa_upper_bound(f, NpaLevel::level2));
}
BENCHMARK(BM_NpaIsLevel2)->Unit(benchmark::kMillisecond);

static void BM_MomentStructureJ42(benchmark::State& state) {
  const Scenario sc = Scenario::square(4, 2);
  for (auto _ : state) benchmark::DoNotOptimize(npa_moment_structure(sc, NpaLevel::level2));
}
BENCHMARK(BM_MomentStructureJ42)->Unit(benchmark::kMillisecond);

static void BM_SeesawChsh(benchmark::State& state) {
  const auto f = chsh().functional;
  SeesawConfig cfg;
  cfg.restarts = 4;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(seesaw(f, cfg));
}
BENCHMARK(BM_SeesawChsh)->Unit(benchmark::kMillisecond);

static void BM_SqsRestartJ42(benchmark::State& state) {
  const auto f = j42().functional;
  ParamOptConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sqs_lower_bound(f, cfg));
}
BENCHMARK(BM_SqsRestartJ42)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
