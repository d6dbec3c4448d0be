#include <benchmark/benchmark.h>

#include "motifsp/census.hpp"
#include "motifsp/generators.hpp"
#include "motifsp/nn.hpp"
#include "motifsp/nullmodel.hpp"

using namespace motifsp;

namespace {

Graph plc(std::size_t n) {
  GeneratorSpec s;
  s.family = Family::PowerlawCluster;
  s.params = {{"n", static_cast<double>(n)}, {"m", 3}, {"p", 0.5}};
  s.seed = 7;
  return generate(s);
}

void BM_Census(benchmark::State& state) {
  Graph g = plc(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(census(g));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_Census)->RangeMultiplier(4)->Range(256, 16384);

void BM_DoubleEdgeSwap(benchmark::State& state) {
  Graph g = plc(static_cast<std::size_t>(state.range(0)));
  const std::size_t q = 10 * g.num_edges();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(double_edge_swap(g, q, seed++));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(q));
}
BENCHMARK(BM_DoubleEdgeSwap)->RangeMultiplier(4)->Range(256, 4096);

void BM_Forward(benchmark::State& state) {
  Graph g = plc(static_cast<std::size_t>(state.range(0)));
  ModelConfig c;
  auto p = init_params(c, 1);
  for (auto _ : state) benchmark::DoNotOptimize(forward(p, c, g));
}
BENCHMARK(BM_Forward)->RangeMultiplier(4)->Range(256, 4096);

void BM_Backward(benchmark::State& state) {
  Graph g = plc(static_cast<std::size_t>(state.range(0)));
  ModelConfig c;
  auto p = init_params(c, 1);
  std::vector<Example> batch{{&g, std::vector<double>(kNumPatterns, 0.1)}};
  for (auto _ : state) benchmark::DoNotOptimize(backward(p, c, batch, true, 3));
}
BENCHMARK(BM_Backward)->RangeMultiplier(4)->Range(256, 4096);

}  // namespace
BENCHMARK_MAIN();
