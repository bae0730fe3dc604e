#include "sng/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "sng/error.hpp"
#include "sng/parallel.hpp"
#include "sng/vecmath.hpp"

namespace sng {

VectorDataset::VectorDataset(std::size_t n, std::size_t d,
                             std::vector<float> data, std::string source)
    : n_(n), d_(d), data_(std::move(data)), source_(std::move(source)) {
  if (n_ == 0 || d_ == 0) {
    throw PreconditionError("VectorDataset: n and d must be >= 1");
  }
  if (data_.size() != n_ * d_) {
    throw PreconditionError("VectorDataset: data length " +
                            std::to_string(data_.size()) + " != n*d = " +
                            std::to_string(n_ * d_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw PreconditionError("VectorDataset: non-finite value in row " +
                              std::to_string(i / d_));
    }
  }
}

VectorDataset VectorDataset::subset(std::span<const std::uint32_t> ids,
                                    std::string source) const {
  std::vector<float> out;
  out.reserve(ids.size() * d_);
  for (std::uint32_t id : ids) {
    if (id >= n_) throw PreconditionError("subset: id out of range");
    const auto r = row(id);
    out.insert(out.end(), r.begin(), r.end());
  }
  return VectorDataset(ids.size(), d_, std::move(out), std::move(source));
}

std::vector<std::vector<std::int32_t>> GroundTruth::ids() const {
  std::vector<std::vector<std::int32_t>> out(rows.size());
  for (std::size_t q = 0; q < rows.size(); ++q) {
    out[q].reserve(rows[q].size());
    for (const Neighbor& nb : rows[q]) {
      out[q].push_back(static_cast<std::int32_t>(nb.id));
    }
  }
  return out;
}

VectorDataset gen_uniform_ball(std::size_t n, std::size_t d, double rho0,
                               std::uint64_t seed) {
  std::ostringstream src;
  src << "uniform-ball(n=" << n << ",d=" << d << ",rho=" << rho0
      << ",seed=" << seed << ")";
  return VectorDataset(n, d, sample_uniform_ball(n, d, rho0, seed), src.str());
}

GmmSample gen_gmm_labeled(std::size_t n, std::size_t d, std::size_t clusters,
                          double spread, std::uint64_t seed) {
  if (n == 0 || d == 0 || clusters == 0 || clusters > n) {
    throw PreconditionError("gen_gmm: need n, d >= 1 and 1 <= clusters <= n");
  }
  if (!(spread >= 0.0) || !std::isfinite(spread)) {
    throw PreconditionError("gen_gmm: spread must be finite and >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, clusters - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<float> means(clusters * d);
  for (float& m : means) m = static_cast<float>(unit(rng));

  std::vector<float> data(n * d);
  std::vector<std::uint32_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = pick(rng);
    labels[i] = static_cast<std::uint32_t>(c);
    for (std::size_t j = 0; j < d; ++j) {
      data[i * d + j] =
          static_cast<float>(means[c * d + j] + spread * gauss(rng));
    }
  }
  std::ostringstream src;
  src << "gmm(n=" << n << ",d=" << d << ",clusters=" << clusters
      << ",spread=" << spread << ",seed=" << seed << ")";
  return GmmSample{VectorDataset(n, d, std::move(data), src.str()),
                   std::move(means), std::move(labels)};
}

VectorDataset gen_gmm(std::size_t n, std::size_t d, std::size_t clusters,
                      double spread, std::uint64_t seed) {
  return std::move(gen_gmm_labeled(n, d, clusters, spread, seed).points);
}

std::pair<VectorDataset, VectorDataset> split_dataset(const VectorDataset& ds,
                                                      double base_fraction,
                                                      std::uint64_t seed) {
  const auto n_base = static_cast<std::size_t>(
      std::llround(static_cast<double>(ds.n()) * base_fraction));
  if (!(base_fraction > 0.0 && base_fraction < 1.0) || n_base == 0 ||
      n_base >= ds.n()) {
    throw PreconditionError("split_dataset: both sides must be non-empty");
  }
  std::vector<std::uint32_t> order(ds.n());
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const std::span<const std::uint32_t> all(order);
  return {ds.subset(all.first(n_base), ds.source() + "[base]"),
          ds.subset(all.subspan(n_base), ds.source() + "[queries]")};
}

GroundTruth brute_force_knn(const VectorDataset& base,
                            const VectorDataset& queries, std::size_t k,
                            unsigned threads) {
  if (base.d() != queries.d()) throw DimensionMismatch(base.d(), queries.d());
  if (k == 0 || k > base.n()) {
    throw PreconditionError("brute_force_knn: need 1 <= k <= n");
  }
  GroundTruth gt;
  gt.k = k;
  gt.rows.resize(queries.n());
  const std::size_t d = base.d();
  parallel_for(queries.n(), threads, [&](std::size_t q) {
    thread_local std::vector<Neighbor> all;
    all.resize(base.n());
    const float* qv = queries.row_ptr(q);
    for (std::size_t i = 0; i < base.n(); ++i) {
      all[i] = {static_cast<std::uint32_t>(i), sq_dist(qv, base.row_ptr(i), d)};
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                      all.end());
    gt.rows[q].assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  });
  return gt;
}

}  // namespace sng
