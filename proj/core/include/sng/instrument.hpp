#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sng/dataset.hpp"
#include "sng/graph.hpp"
#include "sng/trace.hpp"

namespace sng {

/// First iteration t with processed(t) >= m, or nullopt if the trace never
/// gets there (truncated runs). Throws PreconditionError when m == 0.
std::optional<std::size_t> mt_first_passage(const PruningTrace& trace,
                                            std::size_t m);

struct DegreeStats {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  std::vector<std::size_t> histogram;  // histogram[k] = #nodes of degree k
};

DegreeStats degree_stats(const SngGraph& g);

struct PathLengthStats {
  double mean_hops = 0.0;
  std::size_t p99_hops = 0;  // nearest-rank 99th percentile
  std::vector<std::size_t> hops;
  std::vector<std::size_t> expanded;  // nodes expanded per query
};

/// greedy_search from the medoid for every query, aggregating hop counts.
PathLengthStats path_length_stats(const SngGraph& g, const VectorDataset& ds,
                                  const VectorDataset& queries, std::size_t l,
                                  unsigned threads = 1);

/// Mean over queries of |S intersect T| / k, where T is the first k ground
/// truth ids. Throws LengthMismatch when the query counts differ, a result
/// row does not hold exactly k ids, or the ground truth holds fewer than k.
double recall_at_k(const std::vector<std::vector<std::uint32_t>>& results,
                   const GroundTruth& gt, std::size_t k);

struct ProgressPoint {
  std::size_t n = 0;
  double level = 0.0;        // n - n^(1 - nu)
  double mean_passage = 0.0; // mean first passage over this n's traces
  std::size_t traces = 0;
};

struct ProgressReport {
  double nu = 0.0;
  std::vector<ProgressPoint> points;
  double slope = 0.0;  // least-squares slope of ln t(n) against ln n
  bool flagged = false;  // slope > nu + kProgressSlack
};

inline constexpr double kProgressSlack = 0.15;

/// For each dataset size n, the first passage of level n - n^(1 - nu) of its
/// non-truncated traces, then a log-log fit across n. Throws
/// PreconditionError with fewer than 3 distinct n or a trace that never
/// reaches its level.
ProgressReport sublinear_progress_check(
    const std::map<std::size_t, std::vector<PruningTrace>>& traces_by_n,
    double nu);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace sng
