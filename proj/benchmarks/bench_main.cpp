#include <benchmark/benchmark.h>

#include "oscnorm/fracsobolev.hpp"
#include "oscnorm/oscnorms.hpp"

namespace {

using namespace oscnorm;

GridFunction sample(int dim, int level) {
  return generate(RandomGen{17, RandomDistribution::cascade}, dim, level);
}

void BM_BuildStats(benchmark::State& state) {
  const GridFunction g = sample(2, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(CubeStatsTree(g).root().osc2);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_BuildStats)->DenseRange(5, 9, 2)->Unit(benchmark::kMillisecond);

void BM_GaroFront(benchmark::State& state) {
  const CubeStatsTree tree(sample(2, static_cast<int>(state.range(0))));
  FrontOptions opts;
  opts.mode = state.range(1) == 0 ? FrontMode::exact_budget : FrontMode::lambda_sweep;
  for (auto _ : state) benchmark::DoNotOptimize(garo_front(tree, opts).points.size());
  state.SetLabel(to_string(*opts.mode));
}
BENCHMARK(BM_GaroFront)->ArgsProduct({{4, 5, 6}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_JnNorm(benchmark::State& state) {
  const CubeStatsTree tree(sample(2, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(jn_norm(tree, 2.0));
}
BENCHMARK(BM_JnNorm)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_GagliardoField(benchmark::State& state) {
  const GridFunction g = sample(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(gagliardo_field(g, {0.5, 2.0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size() * g.size()));
}
BENCHMARK(BM_GagliardoField)->Args({1, 10})->Args({2, 5})->Args({2, 6})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
