#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sng/error.hpp"
#include "sng/graph.hpp"
#include "sng/instrument.hpp"

namespace {

using sng::oracle::scalar_sq_dist;

// Independent characterisation of a non-truncated prune output: the list is
// ordered by (distance, id), no member is pruned by an earlier member, and
// every other point is pruned by a member that precedes it in that order.
void expect_prune_cover(const std::vector<std::vector<float>>& pts,
                        std::uint32_t p, const std::vector<std::uint32_t>& list,
                        double alpha) {
  auto key = [&](std::uint32_t v) {
    return std::pair{scalar_sq_dist(pts[p], pts[v]), v};
  };
  auto prunes = [&](std::uint32_t u, std::uint32_t v) {
    return scalar_sq_dist(pts[p], pts[v]) >=
           alpha * alpha * scalar_sq_dist(pts[u], pts[v]);
  };
  for (std::size_t i = 1; i < list.size(); ++i) {
    EXPECT_LT(key(list[i - 1]), key(list[i]));
  }
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      EXPECT_FALSE(prunes(list[j], list[i])) << list[j] << " -> " << list[i];
    }
  }
  const std::set<std::uint32_t> members(list.begin(), list.end());
  for (std::uint32_t v = 0; v < pts.size(); ++v) {
    if (v == p || members.count(v)) continue;
    const bool covered = std::any_of(list.begin(), list.end(), [&](auto u) {
      return key(u) < key(v) && prunes(u, v);
    });
    EXPECT_TRUE(covered) << "owner " << p << " leaves " << v << " uncovered";
  }
}

sng::Adjacency complete_graph(std::size_t n) {
  sng::Adjacency adj(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i != j) adj[i].push_back(j);
    }
  }
  return adj;
}

TEST(Medoid, SmallExample) {
  const sng::VectorDataset ds(3, 1, {0.0f, 1.0f, 10.0f}, "m");
  EXPECT_EQ(sng::medoid(ds), 1u);
}

TEST(Medoid, MatchesExhaustiveOracle) {
  const auto ds = sng::gen_gmm(500, 8, 3, 0.2, 8);
  EXPECT_EQ(sng::medoid(ds), sng::oracle::medoid_exhaustive(sng::testing::rows_of(ds)));
  EXPECT_EQ(sng::medoid(ds, 42, 3), sng::medoid(ds, 42, 1));
}

TEST(SngNeighbors, CollinearKeepsOnlyNearest) {
  const sng::VectorDataset ds(4, 1, {0.0f, 1.0f, 2.0f, 3.0f}, "line");
  EXPECT_EQ(sng::sng_neighbors(ds, 0, 1.0, std::nullopt),
            (std::vector<std::uint32_t>{1}));
  // The middle point sees one neighbour on each side.
  EXPECT_EQ(sng::sng_neighbors(ds, 1, 1.0, std::nullopt),
            (std::vector<std::uint32_t>{0, 2}));
}

TEST(SngNeighbors, TruncationCap) {
  const auto ds = sng::gen_uniform_ball(200, 3, 1.0, 3);
  const auto full = sng::sng_neighbors(ds, 7, 1.2, std::nullopt);
  ASSERT_GT(full.size(), 1u);
  const auto one = sng::sng_neighbors(ds, 7, 1.2, 1u);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0], full[0]);
  EXPECT_THROW(sng::sng_neighbors(ds, 7, 1.2, 0u), sng::PreconditionError);
  EXPECT_THROW(sng::sng_neighbors(ds, 200, 1.2, std::nullopt),
               sng::PreconditionError);
}

TEST(SngNeighbors, CoverageOracle) {
  const auto ds = sng::gen_uniform_ball(200, 4, 1.0, 21);
  const auto pts = sng::testing::rows_of(ds);
  for (double alpha : {1.0, 1.2, 2.0}) {
    for (std::uint32_t p : {0u, 57u, 199u}) {
      expect_prune_cover(pts, p, sng::sng_neighbors(ds, p, alpha, std::nullopt),
                         alpha);
    }
  }
}

TEST(SngNeighbors, TraceBookkeeping) {
  const auto ds = sng::gen_uniform_ball(300, 2, 1.0, 4);
  sng::PruningTrace trace;
  const auto list = sng::sng_neighbors(ds, 10, 1.0, std::nullopt, &trace);
  EXPECT_EQ(trace.owner, 10u);
  EXPECT_EQ(trace.candidates, 299u);
  EXPECT_EQ(trace.rows.size(), list.size());
  EXPECT_TRUE(trace.exhausted());
  EXPECT_NO_THROW(sng::check_trace(trace));
  EXPECT_EQ(trace.processed(trace.rows.size()), 299u);
}

TEST(RobustPrune, DropsOwnerAndDuplicates) {
  const auto ds = sng::gen_uniform_ball(50, 3, 1.0, 5);
  const std::vector<std::uint32_t> cands{4, 4, 9, 0, 9, 12, 30, 30};
  const auto out = sng::robust_prune(ds, 0, cands, 1.0, 50);
  EXPECT_EQ(std::count(out.begin(), out.end(), 0u), 0);
  std::set<std::uint32_t> uniq(out.begin(), out.end());
  EXPECT_EQ(uniq.size(), out.size());
  for (auto v : out) EXPECT_TRUE(v == 4 || v == 9 || v == 12 || v == 30);
}

TEST(RobustPrune, AllCandidatesEqualsFullRow) {
  const auto ds = sng::gen_uniform_ball(300, 5, 1.0, 6);
  std::vector<std::uint32_t> all(300);
  std::iota(all.begin(), all.end(), 0u);
  for (double alpha : {1.0, 1.3}) {
    EXPECT_EQ(sng::robust_prune(ds, 17, all, alpha, 299),
              sng::sng_neighbors(ds, 17, alpha, std::nullopt));
    EXPECT_EQ(sng::robust_prune(ds, 17, all, alpha, 3),
              sng::sng_neighbors(ds, 17, alpha, 3u));
  }
  EXPECT_THROW(sng::robust_prune(ds, 17, all, 1.0, 0), sng::PreconditionError);
}

TEST(RobustPrune, SubsetCoverage) {
  const auto ds = sng::gen_uniform_ball(120, 3, 1.0, 7);
  const auto pts = sng::testing::rows_of(ds);
  std::vector<std::uint32_t> cands;
  for (std::uint32_t i = 1; i < 120; i += 2) cands.push_back(i);
  const auto out = sng::robust_prune(ds, 0, cands, 1.2, 1000);
  std::vector<std::vector<float>> sub{pts[0]};
  std::vector<std::uint32_t> mapped;
  for (auto c : cands) sub.push_back(pts[c]);
  for (auto v : out) {
    mapped.push_back(static_cast<std::uint32_t>(
        std::find(cands.begin(), cands.end(), v) - cands.begin() + 1));
  }
  expect_prune_cover(sub, 0, mapped, 1.2);
}

TEST(GreedySearch, CompleteGraphIsExact) {
  const auto ds = sng::gen_uniform_ball(150, 4, 1.0, 9);
  const sng::SngGraph g(4, complete_graph(150), 1.0, std::nullopt, 0,
                        sng::BuildKind::kRandomRegular);
  const auto q = sng::gen_uniform_ball(20, 4, 1.0, 10);
  const auto gt = sng::brute_force_knn(ds, q, 5);
  for (std::size_t i = 0; i < q.n(); ++i) {
    const auto res = sng::greedy_search(g, ds, q.row(i), 3, 5, 5);
    EXPECT_EQ(res.topk, gt.rows[i]);
  }
}

TEST(GreedySearch, PathGraphWalksEveryNode) {
  std::vector<float> xs(10);
  std::iota(xs.begin(), xs.end(), 0.0f);
  const sng::VectorDataset ds(10, 1, xs, "path");
  sng::Adjacency adj(10);
  for (std::uint32_t i = 0; i < 10; ++i) {
    if (i > 0) adj[i].push_back(i - 1);
    if (i < 9) adj[i].push_back(i + 1);
  }
  const sng::SngGraph g(1, adj, 1.0, 2u, 0, sng::BuildKind::kRandomRegular);
  const std::vector<float> q{9.2f};
  const auto res = sng::greedy_search(g, ds, q, 0, 1, 1);
  EXPECT_EQ(res.topk.front().id, 9u);
  EXPECT_EQ(res.hops, 9u);
  EXPECT_EQ(res.path.size(), 10u);
  EXPECT_EQ(res.path.front(), 0u);
  EXPECT_EQ(res.path.back(), 9u);
  EXPECT_GE(res.visited.size(), res.hops);
  EXPECT_EQ(res.visited.front(), 0u);
}

TEST(GreedySearch, Preconditions) {
  const auto ds = sng::gen_uniform_ball(20, 2, 1.0, 1);
  const sng::SngGraph g(2, complete_graph(20), 1.0, std::nullopt, 0,
                        sng::BuildKind::kRandomRegular);
  const std::vector<float> q{0.0f, 0.0f};
  const std::vector<float> q3{0.0f, 0.0f, 0.0f};
  EXPECT_THROW(sng::greedy_search(g, ds, q, 0, 2, 3), sng::PreconditionError);
  EXPECT_THROW(sng::greedy_search(g, ds, q, 0, 2, 0), sng::PreconditionError);
  EXPECT_THROW(sng::greedy_search(g, ds, q, 20, 5, 1), sng::PreconditionError);
  EXPECT_THROW(sng::greedy_search(g, ds, q3, 0, 5, 1), sng::DimensionMismatch);
}

TEST(RandomRegular, DegreesAndDeterminism) {
  const auto adj = sng::random_regular(100, 7, 3);
  EXPECT_NO_THROW(sng::check_structure(adj, 7u));
  for (const auto& row : adj) EXPECT_EQ(row.size(), 7u);
  EXPECT_EQ(adj, sng::random_regular(100, 7, 3));
  EXPECT_THROW(sng::random_regular(5, 5, 3), sng::PreconditionError);
}

TEST(SngGraph, RejectsBrokenStructure) {
  auto adj = complete_graph(4);
  EXPECT_NO_THROW(sng::SngGraph(2, adj, 1.0, 3u, 0, sng::BuildKind::kFullSng));
  EXPECT_THROW(sng::SngGraph(2, adj, 1.0, 2u, 0, sng::BuildKind::kFullSng),
               sng::InvariantViolation);
  EXPECT_THROW(sng::SngGraph(2, adj, 1.0, 3u, 4, sng::BuildKind::kFullSng),
               sng::InvariantViolation);
  EXPECT_THROW(sng::SngGraph(2, adj, 0.9, 3u, 0, sng::BuildKind::kFullSng),
               sng::InvariantViolation);
  adj[1].push_back(1);
  EXPECT_THROW(sng::check_structure(adj, std::nullopt), sng::InvariantViolation);
  adj = complete_graph(4);
  adj[2].push_back(0);
  EXPECT_THROW(sng::check_structure(adj, std::nullopt), sng::InvariantViolation);
  adj = complete_graph(4);
  adj[3].push_back(9);
  EXPECT_THROW(sng::check_structure(adj, std::nullopt), sng::InvariantViolation);
}

TEST(Vamana, DegreeCapAndDeterminism) {
  const auto ds = sng::gen_uniform_ball(2000, 8, 1.0, 12);
  sng::BuildParams params;
  params.r = 16;
  const auto g = sng::build_vamana(ds, params);
  EXPECT_EQ(g.kind(), sng::BuildKind::kVamana);
  EXPECT_EQ(g.r_cap(), 16u);
  EXPECT_LE(g.max_degree(), 16u);
  EXPECT_EQ(g.medoid(), sng::medoid(ds));
  EXPECT_EQ(g, sng::build_vamana(ds, params));
  params.seed = 43;
  EXPECT_NE(g, sng::build_vamana(ds, params));
}

TEST(Vamana, ObserverSeesValidPruneOutputs) {
  const auto ds = sng::gen_uniform_ball(600, 4, 1.0, 13);
  sng::BuildParams params;
  params.r = 10;
  std::size_t calls = 0, bad = 0;
  sng::build_vamana(ds, params, [&](std::uint32_t v, std::span<const std::uint32_t> list) {
    ++calls;
    if (list.size() > 10 || !sng::satisfies_prune_order(ds, v, list, params.alpha)) ++bad;
  });
  EXPECT_GE(calls, 600u);
  EXPECT_EQ(bad, 0u);
}

TEST(Vamana, ParallelBuildKeepsInvariants) {
  const auto ds = sng::gen_uniform_ball(1500, 6, 1.0, 14);
  sng::BuildParams params;
  params.r = 12;
  params.threads = 3;
  const auto g = sng::build_vamana(ds, params);
  EXPECT_NO_THROW(sng::check_structure(g.adjacency(), 12u));
  const auto q = sng::gen_uniform_ball(100, 6, 1.0, 15);
  const auto gt = sng::brute_force_knn(ds, q, 10);
  std::vector<std::vector<std::uint32_t>> ids;
  for (const auto& r : sng::search_batch(g, ds, q, 50, 10, 2)) {
    auto& row = ids.emplace_back();
    for (const auto& nb : r.topk) row.push_back(nb.id);
  }
  EXPECT_GE(sng::recall_at_k(ids, gt, 10), 0.9);
}

TEST(Vamana, Preconditions) {
  const auto ds = sng::gen_uniform_ball(10, 2, 1.0, 1);
  sng::BuildParams params;
  params.r = 10;
  EXPECT_THROW(sng::build_vamana(ds, params), sng::PreconditionError);
  params.r = 4;
  params.alpha = 0.5;
  EXPECT_THROW(sng::build_vamana(ds, params), sng::PreconditionError);
  params.alpha = 1.2;
  params.l_build = 2;
  EXPECT_THROW(sng::build_vamana(ds, params), sng::PreconditionError);
  EXPECT_EQ(sng::BuildParams{}.search_list_size(), 64u);
}

TEST(FullSng, PlanarDegreeBoundAtAlphaOne) {
  // With alpha = 1 any two kept neighbours subtend more than 60 degrees at
  // the owner, so a planar row holds at most 5 points.
  const auto ds = sng::gen_uniform_ball(5000, 2, 1.0, 16);
  std::vector<std::uint32_t> owners(300);
  std::iota(owners.begin(), owners.end(), 0u);
  const auto g = sng::build_full_sng(ds, 1.0, owners);
  EXPECT_EQ(g.kind(), sng::BuildKind::kFullSng);
  EXPECT_FALSE(g.r_cap().has_value());
  EXPECT_LE(g.max_degree(), 5u);
  EXPECT_TRUE(g.neighbors(4000).empty());
}

TEST(FullSng, SampledRowsMatchFullBuild) {
  const auto ds = sng::gen_uniform_ball(400, 3, 1.0, 17);
  const auto full = sng::build_full_sng(ds, 1.2);
  const std::vector<std::uint32_t> owners{5, 123, 399};
  std::vector<sng::PruningTrace> traces;
  const auto part = sng::build_full_sng(ds, 1.2, owners, 2, &traces);
  ASSERT_EQ(traces.size(), 3u);
  for (std::size_t i = 0; i < owners.size(); ++i) {
    const auto o = owners[i];
    EXPECT_TRUE(std::ranges::equal(part.neighbors(o), full.neighbors(o)));
    EXPECT_EQ(traces[i].owner, o);
    EXPECT_EQ(traces[i].rows.size(), full.neighbors(o).size());
  }
  const std::vector<std::uint32_t> dup{1, 1};
  EXPECT_THROW(sng::build_full_sng(ds, 1.2, dup), sng::PreconditionError);
}

class GraphIo : public ::testing::Test {
 protected:
  sng::testing::TempDir dir;
  sng::SngGraph graph = sng::build_vamana(sng::gen_uniform_ball(300, 3, 1.0, 18),
                                          sng::BuildParams{1.2, 8});
  std::string bytes() {
    sng::save_graph(graph, dir / "g.sng");
    return sng::testing::read_bytes(dir / "g.sng");
  }
  sng::FormatErrorKind kind_of(const std::string& b) {
    sng::testing::write_bytes(dir / "bad.sng", b);
    try {
      sng::load_graph(dir / "bad.sng");
    } catch (const sng::FormatError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no FormatError";
    return sng::FormatErrorKind::kMalformedHeader;
  }
};

TEST_F(GraphIo, RoundTrip) {
  const auto b = bytes();
  EXPECT_EQ(b.substr(0, 4), "SNG1");
  const auto back = sng::load_graph(dir / "g.sng");
  EXPECT_EQ(back, graph);
  sng::save_graph(back, dir / "h.sng");
  EXPECT_EQ(sng::testing::read_bytes(dir / "h.sng"), b);
}

TEST_F(GraphIo, DistinctErrors) {
  auto b = bytes();
  auto bad_magic = b;
  bad_magic[0] = 'X';
  EXPECT_EQ(kind_of(bad_magic), sng::FormatErrorKind::kMagicMismatch);
  EXPECT_EQ(kind_of(b.substr(0, 10)), sng::FormatErrorKind::kTruncated);
  EXPECT_EQ(kind_of(b.substr(0, b.size() - 2)), sng::FormatErrorKind::kTruncated);
  EXPECT_EQ(kind_of(b + "x"), sng::FormatErrorKind::kTrailingData);
  auto bad_kind = b;
  bad_kind[24] = 9;
  sng::testing::write_bytes(dir / "kind.sng", bad_kind);
  EXPECT_THROW(sng::load_graph(dir / "kind.sng"), sng::InvariantViolation);
  EXPECT_THROW(sng::load_graph(dir / "missing.sng"), sng::IoError);
}

}  // namespace
