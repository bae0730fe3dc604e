#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sng::cli {

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

// Writes an optional labelled query split next to the generated data.
struct SplitArgs {
  std::optional<double> base_fraction;
  std::string queries_out;
};

struct GenUniformArgs {
  std::size_t n = 0;
  std::size_t d = 0;
  double rho = 1.0;
  std::string out;
  SplitArgs split;
};

struct GenGmmArgs {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t clusters = 10;
  double spread = 0.05;
  std::string out;
  std::string labels_out;
  SplitArgs split;
};

struct GtArgs {
  std::string base, queries, out, distances_out;
  std::size_t k = 100;
};

struct BuildArgs {
  std::string base, out;
  std::string algo = "vamana";
  double alpha = 1.2;
  std::optional<std::uint32_t> r;
  std::string r_from;  // TuneReport JSON; its r_star becomes R
  std::optional<std::uint32_t> l_build;
};

struct TuneArgs {
  std::string base, out;
  double alpha1 = 1.2, alpha2 = 1.2;
  std::optional<std::size_t> probe_subsample;
};

struct SearchArgs {
  std::string base, graph, queries, out;
  std::size_t l = 50, k = 10;
};

struct BenchArgs {
  std::string base, queries, gt, graph, csv, json;
  std::vector<std::size_t> ls{10, 20, 50, 100};
  std::size_t k = 10;
  std::string tuner = "analytic";
  double alpha = 1.2;
  std::optional<std::size_t> probe_subsample;
  std::uint32_t r_lo = 8, r_hi = 0;
  double latency_budget_us = 0.0;
};

struct TraceArgs {
  std::string base, csv;
  std::vector<std::uint32_t> owners;
  double alpha = 1.2;
  std::optional<std::uint32_t> r_cap;
};

struct DegreesArgs {
  std::string graph, csv, json;
};

struct PathsArgs {
  std::string base, graph, queries, csv, json;
  std::size_t l = 50;
};

struct VerifyArgs {
  std::vector<int> only;
  std::string out_dir;
};

int cmd_gen_uniform(const GenUniformArgs&, Context&);
int cmd_gen_gmm(const GenGmmArgs&, Context&);
int cmd_gt(const GtArgs&, Context&);
int cmd_build(const BuildArgs&, Context&);
int cmd_tune(const TuneArgs&, Context&);
int cmd_search(const SearchArgs&, Context&);
int cmd_bench(const BenchArgs&, Context&);
int cmd_trace(const TraceArgs&, Context&);
int cmd_degrees(const DegreesArgs&, Context&);
int cmd_paths(const PathsArgs&, Context&);
int cmd_verify(const VerifyArgs&, Context&);

}  // namespace sng::cli
