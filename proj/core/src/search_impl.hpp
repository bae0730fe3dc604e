#pragma once

// Beam search shared by the public greedy_search and the Vamana build, which
// searches a graph that is still being mutated.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "sng/dataset.hpp"
#include "sng/graph.hpp"
#include "sng/vecmath.hpp"

namespace sng::detail {

class SearchScratch {
 public:
  explicit SearchScratch(std::size_t n) : stamp_(n, 0) {}

  // Starts a new search; returns false for nodes not yet seen in it.
  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  bool test_and_mark(std::uint32_t v) {
    if (stamp_[v] == epoch_) return true;
    stamp_[v] = epoch_;
    return false;
  }

  struct Entry {
    double dist;
    std::uint32_t id;
    bool expanded;
  };
  std::vector<Entry> list;
  std::vector<std::uint32_t> neighbors;

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

// copy_neighbors(v, out) fills `out` with the current out-neighbours of v.
template <typename CopyNeighbors>
SearchResult beam_search(const VectorDataset& ds, const float* query,
                         std::uint32_t start, std::size_t l, std::size_t k,
                         SearchScratch& scratch,
                         CopyNeighbors&& copy_neighbors) {
  using Entry = SearchScratch::Entry;
  const std::size_t d = ds.d();
  auto before = [](const Entry& a, const Entry& b) {
    return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
  };

  scratch.next_epoch();
  auto& list = scratch.list;
  list.clear();
  list.reserve(l + 1);
  scratch.test_and_mark(start);
  list.push_back({sq_dist(query, ds.row_ptr(start), d), start, false});

  SearchResult result;
  result.path.push_back(start);
  double path_dist = list.front().dist;

  std::size_t cursor = 0;  // first unexpanded entry
  while (cursor < list.size()) {
    Entry& current = list[cursor];
    current.expanded = true;
    const std::uint32_t v = current.id;
    result.visited.push_back(v);

    copy_neighbors(v, scratch.neighbors);
    std::size_t lowest_insert = list.size();
    for (std::uint32_t u : scratch.neighbors) {
      if (scratch.test_and_mark(u)) continue;
      const Entry e{sq_dist(query, ds.row_ptr(u), d), u, false};
      if (list.size() == l && !before(e, list.back())) continue;
      auto pos = std::lower_bound(list.begin(), list.end(), e, before);
      const auto idx = static_cast<std::size_t>(pos - list.begin());
      list.insert(pos, e);
      if (list.size() > l) list.pop_back();
      lowest_insert = std::min(lowest_insert, idx);
    }

    if (list.front().dist < path_dist) {
      path_dist = list.front().dist;
      result.path.push_back(list.front().id);
    }

    cursor = std::min(cursor + 1, lowest_insert);
    while (cursor < list.size() && list[cursor].expanded) ++cursor;
  }

  const std::size_t take = std::min(k, list.size());
  result.topk.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    result.topk.push_back({list[i].id, list[i].dist});
  }
  result.hops = result.path.size() - 1;
  return result;
}

}  // namespace sng::detail
