#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sng/dataset.hpp"
#include "sng/trace.hpp"

namespace sng {

enum class BuildKind : std::uint8_t {
  kFullSng = 0,
  kVamana = 1,
  kRandomRegular = 2,
};

std::string_view to_string(BuildKind kind);

using Adjacency = std::vector<std::vector<std::uint32_t>>;

/// Directed proximity graph plus the parameters it was built with.
class SngGraph {
 public:
  /// Validates the structural invariants; throws InvariantViolation.
  SngGraph(std::size_t dim, Adjacency adjacency, double alpha,
           std::optional<std::uint32_t> r_cap, std::uint32_t medoid,
           BuildKind kind);

  std::size_t n() const noexcept { return adjacency_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const std::uint32_t> neighbors(std::uint32_t v) const noexcept {
    return adjacency_[v];
  }
  const Adjacency& adjacency() const noexcept { return adjacency_; }
  // Stored at file precision (float) so save/load round-trips exactly.
  double alpha() const noexcept { return alpha_; }
  std::optional<std::uint32_t> r_cap() const noexcept { return r_cap_; }
  std::uint32_t medoid() const noexcept { return medoid_; }
  BuildKind kind() const noexcept { return kind_; }

  std::size_t max_degree() const noexcept;
  double mean_degree() const noexcept;

  friend bool operator==(const SngGraph&, const SngGraph&) = default;

 private:
  std::size_t dim_;
  Adjacency adjacency_;
  float alpha_;
  std::optional<std::uint32_t> r_cap_;
  std::uint32_t medoid_;
  BuildKind kind_;
};

/// Throws InvariantViolation on self-loops, duplicate ids, ids >= n or
/// degrees above r_cap.
void check_structure(const Adjacency& adjacency,
                     std::optional<std::uint32_t> r_cap);

/// True when `list` is a valid prune output for owner p: distances from p are
/// nondecreasing and every later v satisfies |p - v| <= alpha |u - v| for
/// every earlier u (it survived u's pruning).
bool satisfies_prune_order(const VectorDataset& ds, std::uint32_t p,
                           std::span<const std::uint32_t> list, double alpha);

struct BuildParams {
  double alpha = 1.2;
  std::uint32_t r = 32;
  std::optional<std::uint32_t> l_build;  // default max(2r, 50)
  std::uint64_t seed = 42;
  unsigned threads = 1;

  std::uint32_t search_list_size() const noexcept;
  /// Throws PreconditionError on alpha < 1, r < 1 or l_build < r.
  void validate() const;
};

struct SearchResult {
  std::vector<Neighbor> topk;          // ascending by (sq_dist, id)
  std::vector<std::uint32_t> visited;  // expanded nodes, in expansion order
  std::vector<std::uint32_t> path;     // start, then each improvement of the
                                       // closest known candidate
  std::size_t hops = 0;                // path.size() - 1
};

/// Point minimising the summed Euclidean distance to all others. Exact for
/// n <= 20000; above that the sum runs over a seeded 10000-point sample.
std::uint32_t medoid(const VectorDataset& ds, std::uint64_t seed = 42,
                     unsigned threads = 1);

inline constexpr std::size_t kExactMedoidLimit = 20000;
inline constexpr std::size_t kMedoidSample = 10000;

/// Iterative nearest-neighbour selection with alpha-relaxed pruning over the
/// whole dataset: pop the nearest survivor p* (ties by id), then drop every
/// p' with |p - p'| >= alpha |p* - p'|. Stops when no candidates remain or
/// the list reaches r_cap. Appends one row per iteration to `trace`.
std::vector<std::uint32_t> sng_neighbors(const VectorDataset& ds,
                                         std::uint32_t p, double alpha,
                                         std::optional<std::uint32_t> r_cap,
                                         PruningTrace* trace = nullptr);

/// The same selection rule restricted to `candidates` and capped at r. The
/// owner and duplicate ids are dropped from the candidate set.
std::vector<std::uint32_t> robust_prune(const VectorDataset& ds,
                                        std::uint32_t p,
                                        std::span<const std::uint32_t> candidates,
                                        double alpha, std::uint32_t r);

/// Best-first beam search with a candidate list of size l, from `start`.
/// Throws PreconditionError unless l >= k >= 1 and start < n.
SearchResult greedy_search(const SngGraph& g, const VectorDataset& ds,
                           std::span<const float> query, std::uint32_t start,
                           std::size_t l, std::size_t k);

/// Each node gets r distinct uniformly drawn out-neighbours (no self-loops).
Adjacency random_regular(std::size_t n, std::uint32_t r, std::uint64_t seed);

/// Observer hook for prune outputs produced during a Vamana build.
using PruneObserver =
    std::function<void(std::uint32_t node, std::span<const std::uint32_t>)>;

/// Runs greedy_search from the graph medoid for every row of `queries`.
/// Queries are spread over `threads` workers; results are in query order.
std::vector<SearchResult> search_batch(const SngGraph& g,
                                       const VectorDataset& ds,
                                       const VectorDataset& queries,
                                       std::size_t l, std::size_t k,
                                       unsigned threads = 1);

/// Random r-regular init, medoid entry, one pass over a seeded permutation
/// (search, prune, reverse edges with overflow re-pruning). threads > 1 runs
/// the pass concurrently with per-node locking; that result satisfies every
/// structural invariant but is not bit-identical to the sequential build.
SngGraph build_vamana(const VectorDataset& ds, const BuildParams& params,
                      const PruneObserver& observer = {});

/// Non-truncated SNG. With `owners`, only those rows are computed and every
/// other row is left empty. When `traces` is non-null it receives one trace
/// per computed row, in owner order.
SngGraph build_full_sng(const VectorDataset& ds, double alpha,
                        std::optional<std::span<const std::uint32_t>> owners =
                            std::nullopt,
                        unsigned threads = 1,
                        std::vector<PruningTrace>* traces = nullptr);

// Graph file: "SNG1", u32 n, u32 d, u32 r_cap (0 = none), f32 alpha,
// u32 medoid, u8 build_kind, then per node u32 degree and the ids. All
// little-endian.
void save_graph(const SngGraph& g, const std::filesystem::path& path);
SngGraph load_graph(const std::filesystem::path& path);

}  // namespace sng
