#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>

#include "search_impl.hpp"
#include "sng/error.hpp"
#include "sng/graph.hpp"
#include "sng/parallel.hpp"

namespace sng {
namespace {

// Insert `from` into the out-list of j, re-pruning when the list would
// exceed r.
void add_reverse_edge(const VectorDataset& ds, Adjacency& adj, std::uint32_t j,
                      std::uint32_t from, double alpha, std::uint32_t r,
                      const PruneObserver& observer) {
  auto& row = adj[j];
  if (std::find(row.begin(), row.end(), from) != row.end()) return;
  if (row.size() + 1 > r) {
    std::vector<std::uint32_t> pool = row;
    pool.push_back(from);
    row = robust_prune(ds, j, pool, alpha, r);
    if (observer) observer(j, row);
  } else {
    row.push_back(from);
  }
}

}  // namespace

SngGraph build_vamana(const VectorDataset& ds, const BuildParams& params,
                      const PruneObserver& observer) {
  params.validate();
  const std::size_t n = ds.n();
  if (n <= params.r) {
    throw PreconditionError("build_vamana: need n > r (n=" + std::to_string(n) +
                            ", r=" + std::to_string(params.r) + ")");
  }
  const std::uint32_t r = params.r;
  const std::size_t l = params.search_list_size();
  const double alpha = params.alpha;

  std::mt19937_64 rng(params.seed);
  Adjacency adj = random_regular(n, r, rng());
  const std::uint32_t entry = medoid(ds, rng(), params.threads);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  if (params.threads <= 1) {
    detail::SearchScratch scratch(n);
    auto copy = [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
      out.assign(adj[v].begin(), adj[v].end());
    };
    for (std::uint32_t p : order) {
      const SearchResult found =
          detail::beam_search(ds, ds.row_ptr(p), entry, l, 1, scratch, copy);
      adj[p] = robust_prune(ds, p, found.visited, alpha, r);
      if (observer) observer(p, adj[p]);
      const std::vector<std::uint32_t> out = adj[p];
      for (std::uint32_t j : out) {
        add_reverse_edge(ds, adj, j, p, alpha, r, observer);
      }
    }
  } else {
    std::vector<std::mutex> locks(n);
    std::mutex observer_mu;
    const PruneObserver locked_observer =
        observer ? PruneObserver([&](std::uint32_t v,
                                     std::span<const std::uint32_t> row) {
          std::lock_guard guard(observer_mu);
          observer(v, row);
        })
                 : PruneObserver{};
    const unsigned workers = params.threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t w) {
      detail::SearchScratch scratch(n);
      auto copy = [&](std::uint32_t v, std::vector<std::uint32_t>& out) {
        std::lock_guard guard(locks[v]);
        out.assign(adj[v].begin(), adj[v].end());
      };
      const std::size_t end = std::min(n, (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) {
        const std::uint32_t p = order[i];
        const SearchResult found =
            detail::beam_search(ds, ds.row_ptr(p), entry, l, 1, scratch, copy);
        std::vector<std::uint32_t> pruned =
            robust_prune(ds, p, found.visited, alpha, r);
        {
          std::lock_guard guard(locks[p]);
          adj[p] = pruned;
        }
        if (locked_observer) locked_observer(p, pruned);
        for (std::uint32_t j : pruned) {
          std::lock_guard guard(locks[j]);
          add_reverse_edge(ds, adj, j, p, alpha, r, locked_observer);
        }
      }
    });
  }

  return SngGraph(ds.d(), std::move(adj), alpha, r, entry, BuildKind::kVamana);
}

}  // namespace sng
