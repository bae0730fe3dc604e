#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sng {

/// Immutable n x d single-precision point set, row-major.
class VectorDataset {
 public:
  /// Throws PreconditionError unless n, d >= 1, data.size() == n * d and
  /// every value is finite.
  VectorDataset(std::size_t n, std::size_t d, std::vector<float> data,
                std::string source);

  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return d_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<const float> row(std::size_t i) const noexcept {
    return {data_.data() + i * d_, d_};
  }
  const float* row_ptr(std::size_t i) const noexcept {
    return data_.data() + i * d_;
  }
  const std::string& source() const noexcept { return source_; }

  /// Rows `ids`, in order, as a new dataset.
  VectorDataset subset(std::span<const std::uint32_t> ids,
                       std::string source) const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<float> data_;
  std::string source_;
};

struct Neighbor {
  std::uint32_t id = 0;
  double sq_dist = 0.0;  // squared Euclidean distance

  friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
    return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.id < b.id);
  }
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact k nearest base ids per query, ascending by (sq_dist, id).
struct GroundTruth {
  std::size_t k = 0;
  std::vector<std::vector<Neighbor>> rows;

  std::vector<std::vector<std::int32_t>> ids() const;
};

// fvecs / ivecs: per record a little-endian int32 dimension followed by that
// many little-endian float32 / int32 values.
VectorDataset read_fvecs(const std::filesystem::path& path);
void write_fvecs(const VectorDataset& ds, const std::filesystem::path& path);
std::vector<std::vector<std::int32_t>> read_ivecs(
    const std::filesystem::path& path);
void write_ivecs(const std::vector<std::vector<std::int32_t>>& rows,
                 const std::filesystem::path& path);

VectorDataset gen_uniform_ball(std::size_t n, std::size_t d, double rho0,
                               std::uint64_t seed);

struct GmmSample {
  VectorDataset points;
  std::vector<float> means;           // clusters x d, row-major
  std::vector<std::uint32_t> labels;  // generating cluster per point
};

/// Equal-weight mixture of `clusters` isotropic Gaussians with standard
/// deviation `spread`, means uniform in [0, 1]^d.
GmmSample gen_gmm_labeled(std::size_t n, std::size_t d, std::size_t clusters,
                          double spread, std::uint64_t seed);
VectorDataset gen_gmm(std::size_t n, std::size_t d, std::size_t clusters,
                      double spread, std::uint64_t seed);

/// Seeded shuffle, then the first round(n * base_fraction) rows become the
/// base set and the rest the queries.
std::pair<VectorDataset, VectorDataset> split_dataset(const VectorDataset& ds,
                                                      double base_fraction,
                                                      std::uint64_t seed);

/// Exact k-NN by linear scan. Queries may be spread over `threads` workers;
/// the result is identical to the sequential one.
GroundTruth brute_force_knn(const VectorDataset& base,
                            const VectorDataset& queries, std::size_t k,
                            unsigned threads = 1);

}  // namespace sng
