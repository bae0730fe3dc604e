#pragma once

// CSV and JSON emitters for the instrumentation types, and the recall /
// latency sweep behind the bench command.
//
// CSV columns:
//   trace:      owner,t,s_size,delta,rho,processed
//   degrees:    degree,count
//   paths:      query,hops,expanded
//   bench:      l,k,recall,mean_latency_us,p99_latency_us,mean_hops,
//               mean_expanded,qps

#include <filesystem>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "sng/dataset.hpp"
#include "sng/graph.hpp"
#include "sng/instrument.hpp"

namespace sng {

void write_trace_csv(std::ostream& out, std::span<const PruningTrace> traces);
void write_degree_csv(std::ostream& out, const DegreeStats& stats);
void write_path_csv(std::ostream& out, const PathLengthStats& stats);

nlohmann::json to_json(const DegreeStats& stats);
nlohmann::json to_json(const PathLengthStats& stats);

struct BenchRow {
  std::size_t l = 0;
  std::size_t k = 0;
  double recall = 0.0;
  double mean_latency_us = 0.0;  // wall clock, hardware-dependent
  double p99_latency_us = 0.0;
  double mean_hops = 0.0;
  double mean_expanded = 0.0;
  double qps = 0.0;
};

/// Recall@k and per-query latency for every list size in `ls`. Latency is
/// measured one query at a time on the calling thread.
std::vector<BenchRow> bench_sweep(const SngGraph& g, const VectorDataset& base,
                                  const VectorDataset& queries,
                                  const GroundTruth& gt,
                                  std::span<const std::size_t> ls,
                                  std::size_t k);

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);
nlohmann::json to_json(const BenchRow& row);

/// Opens `path` for writing or throws IoError, then calls fn(stream).
template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn);

}  // namespace sng

#include <fstream>

#include "sng/error.hpp"

template <typename Fn>
void sng::write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  fn(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}
