#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "sng/dataset.hpp"
#include "sng/error.hpp"

namespace {

using sng::FormatError;
using sng::FormatErrorKind;
using sng::testing::TempDir;

std::string le32(std::uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

std::string lef(float f) { return le32(std::bit_cast<std::uint32_t>(f)); }

FormatErrorKind read_error_kind(const std::filesystem::path& p, bool ivecs) {
  try {
    if (ivecs) {
      sng::read_ivecs(p);
    } else {
      sng::read_fvecs(p);
    }
  } catch (const FormatError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no FormatError for " << p;
  return FormatErrorKind::kTrailingData;
}

TEST(VectorDataset, ValidatesConstruction) {
  EXPECT_THROW(sng::VectorDataset(0, 2, {}, "x"), sng::PreconditionError);
  EXPECT_THROW(sng::VectorDataset(2, 2, {1, 2, 3}, "x"), sng::PreconditionError);
  EXPECT_THROW(sng::VectorDataset(1, 2, {1, NAN}, "x"), sng::PreconditionError);
  const sng::VectorDataset ds(2, 2, {1, 2, 3, 4}, "x");
  EXPECT_EQ(ds.row(1)[0], 3.0f);
  const std::vector<std::uint32_t> ids{1, 0, 1};
  const auto sub = ds.subset(ids, "sub");
  EXPECT_EQ(sub.n(), 3u);
  EXPECT_EQ(sub.row(0)[1], 4.0f);
  EXPECT_EQ(sub.row(1)[0], 1.0f);
}

TEST(Fvecs, ReadsHandWrittenFile) {
  TempDir dir;
  sng::testing::write_bytes(dir / "a.fvecs", le32(3) + lef(1.0f) + lef(-2.0f) +
                                                 lef(0.5f) + le32(3) + lef(4.0f) +
                                                 lef(5.0f) + lef(6.25f));
  const auto ds = sng::read_fvecs(dir / "a.fvecs");
  ASSERT_EQ(ds.n(), 2u);
  ASSERT_EQ(ds.d(), 3u);
  EXPECT_EQ(ds.row(0)[1], -2.0f);
  EXPECT_EQ(ds.row(1)[2], 6.25f);
}

TEST(Fvecs, ByteRoundTrip) {
  TempDir dir;
  const auto ds = sng::gen_uniform_ball(50, 7, 1.0, 11);
  sng::write_fvecs(ds, dir / "a.fvecs");
  const auto bytes = sng::testing::read_bytes(dir / "a.fvecs");
  EXPECT_EQ(bytes.size(), 50u * (4 + 7 * 4));
  const auto back = sng::read_fvecs(dir / "a.fvecs");
  EXPECT_TRUE(std::equal(ds.data().begin(), ds.data().end(), back.data().begin(),
                         back.data().end()));
  sng::write_fvecs(back, dir / "b.fvecs");
  EXPECT_EQ(sng::testing::read_bytes(dir / "b.fvecs"), bytes);
}

TEST(Fvecs, DistinctFormatErrors) {
  TempDir dir;
  sng::testing::write_bytes(dir / "empty", "");
  EXPECT_EQ(read_error_kind(dir / "empty", false),
            FormatErrorKind::kMalformedHeader);
  sng::testing::write_bytes(dir / "zero", le32(0));
  EXPECT_EQ(read_error_kind(dir / "zero", false),
            FormatErrorKind::kMalformedHeader);
  sng::testing::write_bytes(dir / "neg", le32(0xffffffffu) + lef(1.0f));
  EXPECT_EQ(read_error_kind(dir / "neg", false),
            FormatErrorKind::kMalformedHeader);
  sng::testing::write_bytes(dir / "short_header",
                            le32(1) + lef(1.0f) + std::string(2, '\0'));
  EXPECT_EQ(read_error_kind(dir / "short_header", false),
            FormatErrorKind::kTruncated);
  sng::testing::write_bytes(dir / "short_payload", le32(2) + lef(1.0f));
  EXPECT_EQ(read_error_kind(dir / "short_payload", false),
            FormatErrorKind::kTruncated);
  sng::testing::write_bytes(dir / "mixed",
                            le32(1) + lef(1.0f) + le32(2) + lef(1.0f) + lef(2.0f));
  EXPECT_EQ(read_error_kind(dir / "mixed", false),
            FormatErrorKind::kInconsistentDimension);
  EXPECT_THROW(sng::read_fvecs(dir / "missing"), sng::IoError);
}

TEST(Ivecs, RoundTripAndErrors) {
  TempDir dir;
  const std::vector<std::vector<std::int32_t>> rows{{1, -2, 3}, {7, 8, 2147483647}};
  sng::write_ivecs(rows, dir / "a.ivecs");
  EXPECT_EQ(sng::read_ivecs(dir / "a.ivecs"), rows);
  EXPECT_EQ(sng::testing::read_bytes(dir / "a.ivecs").substr(0, 8),
            le32(3) + le32(1));
  EXPECT_THROW(sng::write_ivecs({}, dir / "b.ivecs"), sng::PreconditionError);
  EXPECT_THROW(sng::write_ivecs({{1}, {1, 2}}, dir / "b.ivecs"),
               sng::PreconditionError);
  sng::testing::write_bytes(dir / "bad", le32(2) + le32(5));
  EXPECT_EQ(read_error_kind(dir / "bad", true), FormatErrorKind::kTruncated);
}

TEST(Gmm, ClusterMeansWithinSamplingError) {
  const std::size_t n = 20000, d = 4, k = 5;
  const double spread = 0.1;
  const auto s = sng::gen_gmm_labeled(n, d, k, spread, 3);
  ASSERT_EQ(s.labels.size(), n);
  std::vector<double> sum(k * d, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++count[s.labels[i]];
    for (std::size_t j = 0; j < d; ++j) sum[s.labels[i] * d + j] += s.points.row(i)[j];
  }
  for (std::size_t c = 0; c < k; ++c) {
    // Uniform labels: each cluster near n / k.
    EXPECT_NEAR(double(count[c]), double(n) / k, 5.0 * std::sqrt(double(n) / k));
    for (std::size_t j = 0; j < d; ++j) {
      EXPECT_GE(s.means[c * d + j], 0.0f);
      EXPECT_LE(s.means[c * d + j], 1.0f);
      EXPECT_NEAR(sum[c * d + j] / count[c], s.means[c * d + j],
                  5.0 * spread / std::sqrt(double(count[c])));
    }
  }
}

TEST(Gmm, ZeroSpreadCollapsesOnMeans) {
  const auto s = sng::gen_gmm_labeled(100, 3, 4, 0.0, 9);
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(s.points.row(i)[j], s.means[s.labels[i] * 3 + j]);
    }
  }
  EXPECT_THROW(sng::gen_gmm(10, 2, 11, 0.1, 1), sng::PreconditionError);
  EXPECT_THROW(sng::gen_gmm(10, 2, 2, -1.0, 1), sng::PreconditionError);
}

TEST(Generators, DeterministicInSeed) {
  const auto a = sng::gen_gmm(200, 3, 4, 0.05, 17);
  const auto b = sng::gen_gmm(200, 3, 4, 0.05, 17);
  EXPECT_TRUE(std::equal(a.data().begin(), a.data().end(), b.data().begin()));
}

TEST(Split, PartitionsRows) {
  const auto ds = sng::gen_uniform_ball(100, 2, 1.0, 1);
  const auto [base, queries] = sng::split_dataset(ds, 0.9, 5);
  EXPECT_EQ(base.n(), 90u);
  EXPECT_EQ(queries.n(), 10u);
  std::vector<std::vector<float>> all = sng::testing::rows_of(base);
  for (auto& r : sng::testing::rows_of(queries)) all.push_back(r);
  auto orig = sng::testing::rows_of(ds);
  std::sort(all.begin(), all.end());
  std::sort(orig.begin(), orig.end());
  EXPECT_EQ(all, orig);
  EXPECT_THROW(sng::split_dataset(ds, 1.0, 5), sng::PreconditionError);
}

TEST(BruteForce, OneDimensionalExample) {
  const sng::VectorDataset base(3, 1, {0.0f, 10.0f, 20.0f}, "b");
  const sng::VectorDataset q(1, 1, {12.0f}, "q");
  const auto gt = sng::brute_force_knn(base, q, 3);
  ASSERT_EQ(gt.rows.size(), 1u);
  EXPECT_EQ(gt.ids()[0], (std::vector<std::int32_t>{1, 2, 0}));
  EXPECT_DOUBLE_EQ(gt.rows[0][0].sq_dist, 4.0);
  EXPECT_DOUBLE_EQ(gt.rows[0][1].sq_dist, 64.0);
}

TEST(BruteForce, MatchesBaseMajorOracle) {
  const auto base = sng::gen_gmm(600, 5, 6, 0.1, 2);
  const auto q = sng::gen_gmm(40, 5, 6, 0.1, 3);
  const auto gt = sng::brute_force_knn(base, q, 10);
  const auto want = sng::oracle::knn_base_major(sng::testing::rows_of(base),
                                                sng::testing::rows_of(q), 10);
  for (std::size_t i = 0; i < q.n(); ++i) {
    ASSERT_EQ(gt.rows[i].size(), 10u);
    for (std::size_t j = 0; j < 10; ++j) {
      EXPECT_EQ(gt.rows[i][j].id, want[i][j].second);
      EXPECT_DOUBLE_EQ(gt.rows[i][j].sq_dist, want[i][j].first);
    }
  }
}

TEST(BruteForce, ThreadCountDoesNotChangeResult) {
  const auto base = sng::gen_uniform_ball(1000, 6, 1.0, 4);
  const auto q = sng::gen_uniform_ball(97, 6, 1.0, 5);
  const auto a = sng::brute_force_knn(base, q, 7, 1);
  const auto b = sng::brute_force_knn(base, q, 7, 3);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(BruteForce, Preconditions) {
  const auto base = sng::gen_uniform_ball(10, 3, 1.0, 4);
  const auto q2 = sng::gen_uniform_ball(2, 2, 1.0, 5);
  const auto q3 = sng::gen_uniform_ball(2, 3, 1.0, 5);
  EXPECT_THROW(sng::brute_force_knn(base, q2, 1), sng::DimensionMismatch);
  EXPECT_THROW(sng::brute_force_knn(base, q3, 0), sng::PreconditionError);
  EXPECT_THROW(sng::brute_force_knn(base, q3, 11), sng::PreconditionError);
}

}  // namespace
