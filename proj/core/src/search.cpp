#include <memory>

#include "sng/error.hpp"
#include "sng/graph.hpp"
#include "sng/parallel.hpp"
#include "search_impl.hpp"

namespace sng {

namespace {

void check_search_args(const SngGraph& g, const VectorDataset& ds,
                       std::size_t query_dim, std::uint32_t start,
                       std::size_t l, std::size_t k) {
  if (k < 1 || l < k) {
    throw PreconditionError("greedy_search: need l >= k >= 1");
  }
  if (start >= g.n()) {
    throw PreconditionError("greedy_search: start " + std::to_string(start) +
                            " >= n = " + std::to_string(g.n()));
  }
  if (ds.n() != g.n()) {
    throw PreconditionError("greedy_search: dataset and graph sizes differ");
  }
  if (query_dim != ds.d()) throw DimensionMismatch(ds.d(), query_dim);
}

auto graph_neighbors(const SngGraph& g) {
  return [&g](std::uint32_t v, std::vector<std::uint32_t>& out) {
    const auto nb = g.neighbors(v);
    out.assign(nb.begin(), nb.end());
  };
}

}  // namespace

SearchResult greedy_search(const SngGraph& g, const VectorDataset& ds,
                           std::span<const float> query, std::uint32_t start,
                           std::size_t l, std::size_t k) {
  check_search_args(g, ds, query.size(), start, l, k);
  detail::SearchScratch scratch(g.n());
  return detail::beam_search(ds, query.data(), start, l, k, scratch,
                             graph_neighbors(g));
}

std::vector<SearchResult> search_batch(const SngGraph& g,
                                       const VectorDataset& ds,
                                       const VectorDataset& queries,
                                       std::size_t l, std::size_t k,
                                       unsigned threads) {
  check_search_args(g, ds, queries.d(), g.medoid(), l, k);
  std::vector<SearchResult> out(queries.n());
  const unsigned workers = std::max(1u, threads);
  std::vector<std::unique_ptr<detail::SearchScratch>> scratch(workers);
  // Scratch is per query chunk so concurrent workers never share one.
  const std::size_t chunk = (queries.n() + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    scratch[w] = std::make_unique<detail::SearchScratch>(g.n());
    const std::size_t end = std::min(queries.n(), (w + 1) * chunk);
    for (std::size_t q = w * chunk; q < end; ++q) {
      out[q] = detail::beam_search(ds, queries.row_ptr(q), g.medoid(), l, k,
                                   *scratch[w], graph_neighbors(g));
    }
  });
  return out;
}

}  // namespace sng
