#include "sng/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "sng/error.hpp"

namespace sng {

std::size_t PruningTrace::processed(std::size_t t) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < t && i < rows.size(); ++i) {
    total += rows[i].delta + 1;
  }
  return total;
}

void check_trace(const PruningTrace& trace) {
  std::size_t processed = 0;
  for (std::size_t i = 0; i < trace.rows.size(); ++i) {
    const TraceRow& row = trace.rows[i];
    const std::string at = "trace of owner " + std::to_string(trace.owner) +
                           ", row " + std::to_string(i) + ": ";
    if (row.t != i + 1) throw InvariantViolation(at + "t out of sequence");
    if (i > 0 && row.s_size >= trace.rows[i - 1].s_size) {
      throw InvariantViolation(at + "candidate set did not shrink");
    }
    if (i > 0 && row.rho < trace.rows[i - 1].rho) {
      throw InvariantViolation(at + "nearest distance decreased");
    }
    processed += row.delta + 1;
    if (processed + row.s_size != trace.candidates) {
      throw InvariantViolation(at + "processed + remaining != candidates");
    }
  }
}

std::optional<std::size_t> mt_first_passage(const PruningTrace& trace,
                                            std::size_t m) {
  if (m == 0) throw PreconditionError("mt_first_passage: m must be >= 1");
  std::size_t processed = 0;
  for (const TraceRow& row : trace.rows) {
    processed += row.delta + 1;
    if (processed >= m) return row.t;
  }
  return std::nullopt;
}

DegreeStats degree_stats(const SngGraph& g) {
  DegreeStats s;
  s.min = g.n() == 0 ? 0 : g.neighbors(0).size();
  std::size_t total = 0;
  for (std::size_t v = 0; v < g.n(); ++v) {
    const std::size_t deg = g.neighbors(static_cast<std::uint32_t>(v)).size();
    s.min = std::min(s.min, deg);
    s.max = std::max(s.max, deg);
    total += deg;
    if (deg >= s.histogram.size()) s.histogram.resize(deg + 1, 0);
    ++s.histogram[deg];
  }
  s.mean = static_cast<double>(total) / static_cast<double>(g.n());
  return s;
}

PathLengthStats path_length_stats(const SngGraph& g, const VectorDataset& ds,
                                  const VectorDataset& queries, std::size_t l,
                                  unsigned threads) {
  const auto results = search_batch(g, ds, queries, l, 1, threads);
  PathLengthStats s;
  s.hops.reserve(results.size());
  s.expanded.reserve(results.size());
  double total = 0.0;
  for (const SearchResult& r : results) {
    s.hops.push_back(r.hops);
    s.expanded.push_back(r.visited.size());
    total += static_cast<double>(r.hops);
  }
  s.mean_hops = total / static_cast<double>(results.size());
  std::vector<std::size_t> sorted = s.hops;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::ceil(0.99 * static_cast<double>(sorted.size())));
  s.p99_hops = sorted[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

double recall_at_k(const std::vector<std::vector<std::uint32_t>>& results,
                   const GroundTruth& gt, std::size_t k) {
  if (k == 0) throw PreconditionError("recall_at_k: k must be >= 1");
  if (results.size() != gt.rows.size()) {
    throw LengthMismatch("recall_at_k: " + std::to_string(results.size()) +
                         " result rows vs " + std::to_string(gt.rows.size()) +
                         " ground-truth rows");
  }
  if (results.empty()) throw LengthMismatch("recall_at_k: no queries");
  double total = 0.0;
  std::unordered_set<std::uint32_t> truth;
  for (std::size_t q = 0; q < results.size(); ++q) {
    if (results[q].size() != k) {
      throw LengthMismatch("recall_at_k: query " + std::to_string(q) +
                           " returned " + std::to_string(results[q].size()) +
                           " ids, expected " + std::to_string(k));
    }
    if (gt.rows[q].size() < k) {
      throw LengthMismatch("recall_at_k: ground truth for query " +
                           std::to_string(q) + " has fewer than k ids");
    }
    truth.clear();
    for (std::size_t i = 0; i < k; ++i) truth.insert(gt.rows[q][i].id);
    std::size_t hit = 0;
    for (std::uint32_t id : results[q]) hit += truth.count(id);
    total += static_cast<double>(hit) / static_cast<double>(k);
  }
  return total / static_cast<double>(results.size());
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("fit_line: need >= 2 paired samples");
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("fit_line: x values are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

ProgressReport sublinear_progress_check(
    const std::map<std::size_t, std::vector<PruningTrace>>& traces_by_n,
    double nu) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw PreconditionError("sublinear_progress_check: nu must be in (0, 1)");
  }
  std::size_t populated = 0;
  for (const auto& [n, traces] : traces_by_n) populated += !traces.empty();
  if (populated < 3) {
    throw PreconditionError(
        "sublinear_progress_check: need traces for at least 3 distinct n");
  }
  ProgressReport report;
  report.nu = nu;
  std::vector<double> log_n, log_t;
  for (const auto& [n, traces] : traces_by_n) {
    if (traces.empty()) continue;
    ProgressPoint pt;
    pt.n = n;
    const double dn = static_cast<double>(n);
    pt.level = dn - std::pow(dn, 1.0 - nu);
    const auto m = static_cast<std::size_t>(std::ceil(pt.level - 1e-9));
    double total = 0.0;
    for (const PruningTrace& trace : traces) {
      const auto t = mt_first_passage(trace, std::max<std::size_t>(m, 1));
      if (!t) {
        throw PreconditionError("sublinear_progress_check: trace of owner " +
                                std::to_string(trace.owner) +
                                " never reaches level " +
                                std::to_string(pt.level));
      }
      total += static_cast<double>(*t);
    }
    pt.traces = traces.size();
    pt.mean_passage = total / static_cast<double>(traces.size());
    report.points.push_back(pt);
    log_n.push_back(std::log(dn));
    log_t.push_back(std::log(pt.mean_passage));
  }
  report.slope = fit_line(log_n, log_t).slope;
  report.flagged = report.slope > nu + kProgressSlack;
  return report;
}

}  // namespace sng
