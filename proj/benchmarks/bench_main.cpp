#include <cstdint>
#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "sng/dataset.hpp"
#include "sng/graph.hpp"
#include "sng/vecmath.hpp"

namespace {

void BM_SqDist(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto pts = sng::sample_uniform_ball(2, d, 1.0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sng::sq_dist(pts.data(), pts.data() + d, d));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SqDist)->Arg(8)->Arg(128)->Arg(960);

void BM_PruningProbability(benchmark::State& state) {
  const auto g = sng::PruneGeometry::make(0.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sng::pruning_probability(g));
}
BENCHMARK(BM_PruningProbability)->Arg(2)->Arg(16)->Arg(128);

void BM_RobustPrune(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ds = sng::gen_uniform_ball(n, 8, 1.0, 2);
  std::vector<std::uint32_t> cands(n);
  std::iota(cands.begin(), cands.end(), 0u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sng::robust_prune(ds, 0, cands, 1.2, 32));
  }
}
BENCHMARK(BM_RobustPrune)->Arg(128)->Arg(1024);

void BM_FullSngRow(benchmark::State& state) {
  const auto ds = sng::gen_uniform_ball(static_cast<std::size_t>(state.range(0)),
                                        8, 1.0, 3);
  std::uint32_t owner = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sng::sng_neighbors(ds, owner, 1.2, std::nullopt));
    owner = (owner + 1) % static_cast<std::uint32_t>(ds.n());
  }
}
BENCHMARK(BM_FullSngRow)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_GreedySearch(benchmark::State& state) {
  static const auto ds = sng::gen_uniform_ball(20000, 8, 1.0, 4);
  static const auto g = [] {
    sng::BuildParams params;
    params.r = 32;
    return sng::build_vamana(ds, params);
  }();
  static const auto q = sng::gen_uniform_ball(1000, 8, 1.0, 5);
  const auto l = static_cast<std::size_t>(state.range(0));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sng::greedy_search(g, ds, q.row(i), g.medoid(), l, 10));
    i = (i + 1) % q.n();
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GreedySearch)->Arg(10)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_BuildVamana(benchmark::State& state) {
  const auto ds = sng::gen_uniform_ball(static_cast<std::size_t>(state.range(0)),
                                        8, 1.0, 6);
  sng::BuildParams params;
  params.r = 24;
  for (auto _ : state) benchmark::DoNotOptimize(sng::build_vamana(ds, params));
}
BENCHMARK(BM_BuildVamana)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
