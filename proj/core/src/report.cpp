#include "sng/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>

#include "sng/error.hpp"

namespace sng {

void write_trace_csv(std::ostream& out, std::span<const PruningTrace> traces) {
  out << "owner,t,s_size,delta,rho,processed\n";
  out << std::setprecision(9);
  for (const PruningTrace& trace : traces) {
    std::size_t processed = 0;
    for (const TraceRow& row : trace.rows) {
      processed += row.delta + 1;
      out << trace.owner << ',' << row.t << ',' << row.s_size << ','
          << row.delta << ',' << row.rho << ',' << processed << '\n';
    }
  }
}

void write_degree_csv(std::ostream& out, const DegreeStats& stats) {
  out << "degree,count\n";
  for (std::size_t deg = 0; deg < stats.histogram.size(); ++deg) {
    out << deg << ',' << stats.histogram[deg] << '\n';
  }
}

void write_path_csv(std::ostream& out, const PathLengthStats& stats) {
  out << "query,hops,expanded\n";
  for (std::size_t q = 0; q < stats.hops.size(); ++q) {
    out << q << ',' << stats.hops[q] << ',' << stats.expanded[q] << '\n';
  }
}

nlohmann::json to_json(const DegreeStats& stats) {
  const auto mode = std::max_element(stats.histogram.begin(),
                                     stats.histogram.end());
  return {{"min", stats.min},
          {"max", stats.max},
          {"mean", stats.mean},
          {"mode", mode == stats.histogram.end()
                       ? 0
                       : static_cast<std::size_t>(mode -
                                                  stats.histogram.begin())}};
}

nlohmann::json to_json(const PathLengthStats& stats) {
  double expanded = 0.0;
  for (std::size_t e : stats.expanded) expanded += static_cast<double>(e);
  if (!stats.expanded.empty()) expanded /= static_cast<double>(stats.expanded.size());
  return {{"queries", stats.hops.size()},
          {"mean_hops", stats.mean_hops},
          {"p99_hops", stats.p99_hops},
          {"mean_expanded", expanded}};
}

std::vector<BenchRow> bench_sweep(const SngGraph& g, const VectorDataset& base,
                                  const VectorDataset& queries,
                                  const GroundTruth& gt,
                                  std::span<const std::size_t> ls,
                                  std::size_t k) {
  using Clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (std::size_t l : ls) {
    BenchRow row;
    row.l = l;
    row.k = k;
    std::vector<std::vector<std::uint32_t>> ids(queries.n());
    std::vector<double> latency(queries.n());
    double hops = 0.0, expanded = 0.0;
    const auto sweep_start = Clock::now();
    for (std::size_t q = 0; q < queries.n(); ++q) {
      const auto t0 = Clock::now();
      const SearchResult r = greedy_search(g, base, queries.row(q),
                                           g.medoid(), std::max(l, k), k);
      latency[q] =
          std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
      for (const Neighbor& nb : r.topk) ids[q].push_back(nb.id);
      hops += static_cast<double>(r.hops);
      expanded += static_cast<double>(r.visited.size());
    }
    const double total =
        std::chrono::duration<double>(Clock::now() - sweep_start).count();
    const double nq = static_cast<double>(queries.n());
    row.recall = recall_at_k(ids, gt, k);
    double sum = 0.0;
    for (double v : latency) sum += v;
    row.mean_latency_us = sum / nq;
    std::sort(latency.begin(), latency.end());
    const auto rank = static_cast<std::size_t>(std::ceil(0.99 * nq));
    row.p99_latency_us = latency[std::max<std::size_t>(rank, 1) - 1];
    row.mean_hops = hops / nq;
    row.mean_expanded = expanded / nq;
    row.qps = total > 0.0 ? nq / total : 0.0;
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "l,k,recall,mean_latency_us,p99_latency_us,mean_hops,mean_expanded,"
         "qps\n";
  out << std::setprecision(6);
  for (const BenchRow& r : rows) {
    out << r.l << ',' << r.k << ',' << r.recall << ',' << r.mean_latency_us
        << ',' << r.p99_latency_us << ',' << r.mean_hops << ','
        << r.mean_expanded << ',' << r.qps << '\n';
  }
}

nlohmann::json to_json(const BenchRow& r) {
  return {{"l", r.l},
          {"k", r.k},
          {"recall", r.recall},
          {"mean_latency_us", r.mean_latency_us},
          {"p99_latency_us", r.p99_latency_us},
          {"mean_hops", r.mean_hops},
          {"mean_expanded", r.mean_expanded},
          {"qps", r.qps},
          {"latency_note", "wall-clock microseconds, hardware-dependent"}};
}

}  // namespace sng
