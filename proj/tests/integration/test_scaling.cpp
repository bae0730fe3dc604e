#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "sng/graph.hpp"
#include "sng/instrument.hpp"
#include "sng/report.hpp"
#include "sng/tuner.hpp"

namespace {

std::vector<std::uint32_t> sample_owners(std::size_t n, std::size_t m,
                                         std::uint64_t seed) {
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(m);
  std::sort(ids.begin(), ids.end());
  return ids;
}

TEST(Scaling, SublinearProgressOnUniformData) {
  std::map<std::size_t, std::vector<sng::PruningTrace>> by_n;
  for (std::size_t n : {5000u, 10000u, 20000u, 40000u}) {
    const auto ds = sng::gen_uniform_ball(n, 8, 1.0, 100 + n);
    const auto owners = sample_owners(n, 40, n);
    std::vector<sng::PruningTrace> traces;
    sng::build_full_sng(ds, 1.2, owners, 1, &traces);
    for (const auto& tr : traces) {
      ASSERT_TRUE(tr.exhausted());
      ASSERT_EQ(tr.candidates, n - 1);
      sng::check_trace(tr);
    }
    by_n[n] = std::move(traces);
  }
  const auto rep = sng::sublinear_progress_check(by_n, 0.8);
  ASSERT_EQ(rep.points.size(), 4u);
  EXPECT_LE(rep.slope, 0.95);
  for (std::size_t i = 1; i < rep.points.size(); ++i) {
    EXPECT_GE(rep.points[i].mean_passage, rep.points[i - 1].mean_passage * 0.5);
  }
}

TEST(Scaling, RecallNondecreasingInListSize) {
  const auto all = sng::gen_uniform_ball(6000, 8, 1.0, 7);
  const auto [base, queries] = sng::split_dataset(all, 5.0 / 6.0, 8);
  const auto gt = sng::brute_force_knn(base, queries, 10);
  const auto tuned = sng::optimize_r(base, 1.2, 1.2);
  sng::BuildParams params;
  params.r = tuned.r_star;
  const auto g = sng::build_vamana(base, params);
  const std::vector<std::size_t> ls{10, 20, 50};
  const auto rows = sng::bench_sweep(g, base, queries, gt, ls, 10);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].recall, rows[i - 1].recall);
  }
  EXPECT_GE(rows.back().recall, 0.95);
}

TEST(Scaling, PersistedPipelineReproducesSearch) {
  sng::testing::TempDir dir;
  const auto base = sng::gen_gmm(3000, 8, 10, 0.05, 9);
  const auto q = sng::gen_gmm(100, 8, 10, 0.05, 10);
  sng::write_fvecs(base, dir / "base.fvecs");
  const auto reread = sng::read_fvecs(dir / "base.fvecs");
  sng::BuildParams params;
  params.r = 20;
  const auto g = sng::build_vamana(reread, params);
  sng::save_graph(g, dir / "g.sng");
  const auto loaded = sng::load_graph(dir / "g.sng");
  ASSERT_EQ(loaded, g);
  const auto a = sng::search_batch(g, base, q, 40, 10);
  const auto b = sng::search_batch(loaded, reread, q, 40, 10, 2);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].topk, b[i].topk);
}

}  // namespace
