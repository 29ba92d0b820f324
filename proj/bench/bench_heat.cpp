#include <benchmark/benchmark.h>

#include "herz/heat.hpp"
#include "herz/norms.hpp"

using namespace herz;

static void heat_parallel(benchmark::State& st) {
  QuadratureSpec quad;
  const auto grid = RadialGrid::standard(quad);
  const RadialFunction f = Gaussian{0.3, 2.0};
  for (auto _ : st) benchmark::DoNotOptimize(heat_apply(f, 0.02, 3, quad, grid));
}
BENCHMARK(heat_parallel)->Unit(benchmark::kMillisecond);

static void heat_serial(benchmark::State& st) {
  QuadratureSpec quad;
  const auto grid = RadialGrid::standard(quad);
  const RadialFunction f = Gaussian{0.3, 2.0};
  for (auto _ : st) benchmark::DoNotOptimize(heat_apply_serial(f, 0.02, 3, quad, grid));
}
BENCHMARK(heat_serial)->Unit(benchmark::kMillisecond);

static void herz_norm_ball(benchmark::State& st) {
  const auto idx = HerzIndex::make(0, 2, 2);
  for (auto _ : st) benchmark::DoNotOptimize(herz_norm_of(BallIndicator{1.0}, idx, 3));
}
BENCHMARK(herz_norm_ball)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
