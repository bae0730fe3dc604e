#include "sng/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>

#include "sng/error.hpp"
#include "sng/parallel.hpp"
#include "sng/vecmath.hpp"

namespace sng {

std::string_view to_string(BuildKind kind) {
  switch (kind) {
    case BuildKind::kFullSng:
      return "full-sng";
    case BuildKind::kVamana:
      return "vamana";
    case BuildKind::kRandomRegular:
      return "random-regular";
  }
  return "unknown";
}

void check_structure(const Adjacency& adjacency,
                     std::optional<std::uint32_t> r_cap) {
  const std::size_t n = adjacency.size();
  std::vector<std::uint32_t> seen(n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t v = 0; v < n; ++v) {
    const auto& row = adjacency[v];
    if (r_cap && row.size() > *r_cap) {
      throw InvariantViolation("node " + std::to_string(v) + " has degree " +
                               std::to_string(row.size()) + " > r_cap " +
                               std::to_string(*r_cap));
    }
    for (std::uint32_t u : row) {
      if (u >= n) {
        throw InvariantViolation("node " + std::to_string(v) +
                                 " links to id " + std::to_string(u) +
                                 " >= n = " + std::to_string(n));
      }
      if (u == v) {
        throw InvariantViolation("self-loop at node " + std::to_string(v));
      }
      if (seen[u] == v) {
        throw InvariantViolation("duplicate neighbour " + std::to_string(u) +
                                 " at node " + std::to_string(v));
      }
      seen[u] = static_cast<std::uint32_t>(v);
    }
  }
}

SngGraph::SngGraph(std::size_t dim, Adjacency adjacency, double alpha,
                   std::optional<std::uint32_t> r_cap, std::uint32_t medoid,
                   BuildKind kind)
    : dim_(dim),
      adjacency_(std::move(adjacency)),
      alpha_(static_cast<float>(alpha)),
      r_cap_(r_cap),
      medoid_(medoid),
      kind_(kind) {
  if (adjacency_.empty()) throw InvariantViolation("graph has no nodes");
  if (dim_ == 0) throw InvariantViolation("graph dimension is zero");
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw InvariantViolation("alpha must be finite and >= 1");
  }
  if (r_cap_ && *r_cap_ == 0) throw InvariantViolation("r_cap must be >= 1");
  if (medoid_ >= adjacency_.size()) {
    throw InvariantViolation("medoid " + std::to_string(medoid_) +
                             " out of range");
  }
  check_structure(adjacency_, r_cap_);
}

std::size_t SngGraph::max_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& row : adjacency_) best = std::max(best, row.size());
  return best;
}

double SngGraph::mean_degree() const noexcept {
  std::size_t total = 0;
  for (const auto& row : adjacency_) total += row.size();
  return static_cast<double>(total) / static_cast<double>(adjacency_.size());
}

bool satisfies_prune_order(const VectorDataset& ds, std::uint32_t p,
                           std::span<const std::uint32_t> list, double alpha) {
  const std::size_t d = ds.d();
  const double alpha2 = alpha * alpha;
  double last = -1.0;
  for (std::size_t j = 0; j < list.size(); ++j) {
    const std::uint32_t v = list[j];
    const double pv = sq_dist(ds.row_ptr(p), ds.row_ptr(v), d);
    if (pv < last) return false;
    last = pv;
    for (std::size_t i = 0; i < j; ++i) {
      const double uv = sq_dist(ds.row_ptr(list[i]), ds.row_ptr(v), d);
      if (pv >= alpha2 * uv) return false;
    }
  }
  return true;
}

std::uint32_t BuildParams::search_list_size() const noexcept {
  return l_build.value_or(std::max<std::uint32_t>(2 * r, 50));
}

void BuildParams::validate() const {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    throw PreconditionError("alpha must be finite and >= 1");
  }
  if (r < 1) throw PreconditionError("r must be >= 1");
  if (search_list_size() < r) {
    throw PreconditionError("l_build (" + std::to_string(search_list_size()) +
                            ") must be >= r (" + std::to_string(r) + ")");
  }
}

std::uint32_t medoid(const VectorDataset& ds, std::uint64_t seed,
                     unsigned threads) {
  const std::size_t n = ds.n();
  const std::size_t d = ds.d();
  if (n == 1) return 0;

  std::vector<std::uint32_t> reference(n);
  std::iota(reference.begin(), reference.end(), 0u);
  if (n > kExactMedoidLimit) {
    std::mt19937_64 rng(seed);
    std::shuffle(reference.begin(), reference.end(), rng);
    reference.resize(kMedoidSample);
    std::sort(reference.begin(), reference.end());
  }

  std::vector<double> total(n, 0.0);
  parallel_for(n, threads, [&](std::size_t i) {
    double sum = 0.0;
    const float* xi = ds.row_ptr(i);
    for (std::uint32_t j : reference) {
      sum += std::sqrt(sq_dist(xi, ds.row_ptr(j), d));
    }
    total[i] = sum;
  });
  const auto best = std::min_element(total.begin(), total.end());
  return static_cast<std::uint32_t>(best - total.begin());
}

std::vector<std::uint32_t> sng_neighbors(const VectorDataset& ds,
                                         std::uint32_t p, double alpha,
                                         std::optional<std::uint32_t> r_cap,
                                         PruningTrace* trace) {
  const std::size_t n = ds.n();
  const std::size_t d = ds.d();
  if (n < 2) throw PreconditionError("sng_neighbors: need n >= 2");
  if (p >= n) throw PreconditionError("sng_neighbors: owner out of range");
  if (r_cap && *r_cap == 0) throw PreconditionError("sng_neighbors: r_cap 0");
  const double alpha2 = alpha * alpha;
  const float* owner = ds.row_ptr(p);

  struct Candidate {
    std::uint32_t id;
    double to_owner;
  };
  auto closer = [](const Candidate& a, const Candidate& b) {
    return a.to_owner < b.to_owner ||
           (a.to_owner == b.to_owner && a.id < b.id);
  };

  // Candidate set S in id order; the scan that prunes also locates the next
  // nearest survivor, so no ordering of S is maintained.
  std::vector<Candidate> live;
  live.reserve(n - 1);
  std::size_t nearest = 0;
  for (std::uint32_t j = 0; j < n; ++j) {
    if (j == p) continue;
    live.push_back({j, sq_dist(owner, ds.row_ptr(j), d)});
    if (closer(live.back(), live[nearest])) nearest = live.size() - 1;
  }
  if (trace) {
    trace->owner = p;
    trace->candidates = live.size();
    trace->rows.clear();
  }

  std::vector<std::uint32_t> out;
  std::size_t t = 0;
  while (!live.empty()) {
    const Candidate chosen = live[nearest];
    live[nearest] = live.back();
    live.pop_back();
    out.push_back(chosen.id);
    ++t;

    std::size_t pruned = 0;
    if (!(r_cap && out.size() == *r_cap)) {
      const float* star = ds.row_ptr(chosen.id);
      std::size_t keep = 0;
      nearest = 0;
      for (std::size_t i = 0; i < live.size(); ++i) {
        const Candidate c = live[i];
        if (c.to_owner >= alpha2 * sq_dist(star, ds.row_ptr(c.id), d)) {
          ++pruned;
          continue;
        }
        live[keep] = c;
        if (keep == 0 || closer(c, live[nearest])) nearest = keep;
        ++keep;
      }
      live.resize(keep);
    }
    if (trace) {
      trace->rows.push_back({t, live.size(), pruned, std::sqrt(chosen.to_owner)});
    }
    if (r_cap && out.size() == *r_cap) break;
  }
  return out;
}

std::vector<std::uint32_t> robust_prune(
    const VectorDataset& ds, std::uint32_t p,
    std::span<const std::uint32_t> candidates, double alpha, std::uint32_t r) {
  if (r == 0) throw PreconditionError("robust_prune: r must be >= 1");
  const std::size_t d = ds.d();
  const float* owner = ds.row_ptr(p);
  std::vector<Neighbor> pool;
  pool.reserve(candidates.size());
  for (std::uint32_t c : candidates) {
    if (c == p) continue;
    pool.push_back({c, sq_dist(owner, ds.row_ptr(c), d)});
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end(),
                         [](const Neighbor& a, const Neighbor& b) {
                           return a.id == b.id;
                         }),
             pool.end());

  const double alpha2 = alpha * alpha;
  std::vector<char> pruned(pool.size(), 0);
  std::vector<std::uint32_t> out;
  out.reserve(std::min<std::size_t>(r, pool.size()));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pruned[i]) continue;
    out.push_back(pool[i].id);
    if (out.size() == r) break;
    const float* star = ds.row_ptr(pool[i].id);
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (pruned[j]) continue;
      if (pool[j].sq_dist >= alpha2 * sq_dist(star, ds.row_ptr(pool[j].id), d)) {
        pruned[j] = 1;
      }
    }
  }
  return out;
}

Adjacency random_regular(std::size_t n, std::uint32_t r, std::uint64_t seed) {
  if (r >= n) {
    throw PreconditionError("random_regular: need r < n (r=" +
                            std::to_string(r) + ", n=" + std::to_string(n) +
                            ")");
  }
  std::mt19937_64 rng(seed);
  Adjacency adj(n);
  std::unordered_set<std::uint32_t> chosen;
  for (std::size_t v = 0; v < n; ++v) {
    // Floyd's sampling of r distinct values from [0, n - 1), then shift
    // values >= v up by one to skip the node itself.
    chosen.clear();
    auto& row = adj[v];
    row.reserve(r);
    const std::size_t pool = n - 1;
    for (std::size_t j = pool - r; j < pool; ++j) {
      std::uniform_int_distribution<std::size_t> pick(0, j);
      auto t = static_cast<std::uint32_t>(pick(rng));
      if (!chosen.insert(t).second) {
        t = static_cast<std::uint32_t>(j);
        chosen.insert(t);
      }
      row.push_back(t >= v ? t + 1 : t);
    }
  }
  return adj;
}

SngGraph build_full_sng(const VectorDataset& ds, double alpha,
                        std::optional<std::span<const std::uint32_t>> owners,
                        unsigned threads, std::vector<PruningTrace>* traces) {
  if (ds.n() < 2) throw PreconditionError("build_full_sng: need n >= 2");
  if (!(alpha >= 1.0)) throw PreconditionError("alpha must be >= 1");
  std::vector<std::uint32_t> all;
  if (!owners) {
    all.resize(ds.n());
    std::iota(all.begin(), all.end(), 0u);
  }
  const std::span<const std::uint32_t> rows = owners ? *owners : all;
  std::vector<char> listed(ds.n(), 0);
  for (std::uint32_t p : rows) {
    if (p >= ds.n()) throw PreconditionError("build_full_sng: owner id >= n");
    if (listed[p]) throw PreconditionError("build_full_sng: duplicate owner");
    listed[p] = 1;
  }

  Adjacency adj(ds.n());
  if (traces) traces->assign(rows.size(), PruningTrace{});
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    adj[rows[i]] = sng_neighbors(ds, rows[i], alpha, std::nullopt,
                                 traces ? &(*traces)[i] : nullptr);
  });
  return SngGraph(ds.d(), std::move(adj), alpha, std::nullopt,
                  medoid(ds, 42, threads), BuildKind::kFullSng);
}

}  // namespace sng
