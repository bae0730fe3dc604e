#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "sng/error.hpp"
#include "sng/experiments.hpp"
#include "sng/graph.hpp"
#include "sng/instrument.hpp"
#include "sng/report.hpp"
#include "sng/tuner.hpp"
#include "sng/vecmath.hpp"
#include "usage_error.hpp"

namespace sng::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Relative paths resolve against $SNG_DATA_DIR when it is set.
fs::path resolve(const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kDataDirEnv); dir && *dir) {
      return fs::path(dir) / path;
    }
  }
  return path;
}

void write_json(const std::string& p, const nlohmann::json& j) {
  write_file(resolve(p), [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

void maybe_split(const VectorDataset& ds, const SplitArgs& split,
                 const std::string& out, Context& ctx) {
  if (!split.base_fraction) {
    write_fvecs(ds, resolve(out));
    ctx.out << "wrote " << ds.n() << " x " << ds.d() << " to " << out << '\n';
    return;
  }
  if (split.queries_out.empty()) {
    throw UsageError("--split requires --queries-out");
  }
  const auto [base, queries] = split_dataset(ds, *split.base_fraction, ctx.seed);
  write_fvecs(base, resolve(out));
  write_fvecs(queries, resolve(split.queries_out));
  ctx.out << "wrote " << base.n() << " x " << base.d() << " to " << out
          << " and " << queries.n() << " queries to " << split.queries_out
          << '\n';
}

// Ground truth from an ivecs id file; distances are recomputed so the rows
// carry the same (sq_dist, id) order brute_force_knn produces.
GroundTruth load_ground_truth(const std::string& p, const VectorDataset& base,
                              const VectorDataset& queries, std::size_t k) {
  const auto ids = read_ivecs(resolve(p));
  if (ids.size() != queries.n()) {
    throw LengthMismatch("ground truth has " + std::to_string(ids.size()) +
                         " rows for " + std::to_string(queries.n()) +
                         " queries");
  }
  GroundTruth gt;
  gt.k = ids.front().size();
  if (gt.k < k) {
    throw LengthMismatch("ground truth holds " + std::to_string(gt.k) +
                         " ids per query, need k = " + std::to_string(k));
  }
  for (std::size_t q = 0; q < ids.size(); ++q) {
    auto& row = gt.rows.emplace_back();
    for (std::int32_t id : ids[q]) {
      if (id < 0 || static_cast<std::size_t>(id) >= base.n()) {
        throw FormatError(FormatErrorKind::kMalformedHeader,
                          p + ": id " + std::to_string(id) +
                              " outside the base set");
      }
      const auto u = static_cast<std::uint32_t>(id);
      row.push_back({u, sq_euclidean(base.row(u), queries.row(q))});
    }
  }
  return gt;
}

TuneReport analytic_tune(const VectorDataset& base, double alpha1,
                         double alpha2,
                         std::optional<std::size_t> probe_subsample,
                         Context& ctx) {
  TuneOptions opts;
  opts.seed = ctx.seed;
  opts.threads = ctx.threads;
  opts.probe_subsample = probe_subsample;
  return optimize_r(base, alpha1, alpha2, opts);
}

void check_graph_matches(const SngGraph& g, const VectorDataset& ds) {
  if (g.n() != ds.n()) {
    throw InvariantViolation("graph has " + std::to_string(g.n()) +
                             " nodes but the base set has " +
                             std::to_string(ds.n()) + " points");
  }
  if (g.dim() != ds.d()) throw DimensionMismatch(g.dim(), ds.d());
}

}  // namespace

int cmd_gen_uniform(const GenUniformArgs& a, Context& ctx) {
  maybe_split(gen_uniform_ball(a.n, a.d, a.rho, ctx.seed), a.split, a.out, ctx);
  return kOk;
}

int cmd_gen_gmm(const GenGmmArgs& a, Context& ctx) {
  auto sample = gen_gmm_labeled(a.n, a.d, a.clusters, a.spread, ctx.seed);
  if (!a.labels_out.empty()) {
    std::vector<std::vector<std::int32_t>> rows;
    rows.reserve(sample.labels.size());
    for (auto l : sample.labels) rows.push_back({static_cast<std::int32_t>(l)});
    write_ivecs(rows, resolve(a.labels_out));
  }
  maybe_split(sample.points, a.split, a.out, ctx);
  return kOk;
}

int cmd_gt(const GtArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  const auto queries = read_fvecs(resolve(a.queries));
  const auto gt = brute_force_knn(base, queries, a.k, ctx.threads);
  write_ivecs(gt.ids(), resolve(a.out));
  if (!a.distances_out.empty()) {
    std::vector<float> dist;
    for (const auto& row : gt.rows) {
      for (const auto& nb : row) dist.push_back(static_cast<float>(nb.sq_dist));
    }
    write_fvecs(VectorDataset(queries.n(), a.k, std::move(dist), "gt"),
                resolve(a.distances_out));
  }
  ctx.out << "wrote " << queries.n() << " x " << a.k << " neighbour ids to "
          << a.out << '\n';
  return kOk;
}

int cmd_build(const BuildArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  const auto t0 = Clock::now();
  nlohmann::json summary;
  if (a.algo == "full-sng") {
    if (a.r || !a.r_from.empty() || a.l_build) {
      throw UsageError("full-sng takes no truncation or list-size flags");
    }
    const auto g = build_full_sng(base, a.alpha, std::nullopt, ctx.threads);
    save_graph(g, resolve(a.out));
    summary = {{"algo", "full-sng"}, {"n", g.n()},
               {"max_degree", g.max_degree()}, {"mean_degree", g.mean_degree()}};
  } else if (a.algo == "vamana") {
    if (a.r && !a.r_from.empty()) throw UsageError("give --r or --r-from, not both");
    BuildParams params;
    params.alpha = a.alpha;
    params.seed = ctx.seed;
    params.threads = ctx.threads;
    params.l_build = a.l_build;
    if (a.r) {
      params.r = *a.r;
    } else if (!a.r_from.empty()) {
      std::ifstream in(resolve(a.r_from));
      if (!in) throw IoError("cannot open " + a.r_from);
      params.r = tune_report_from_json(nlohmann::json::parse(in)).r_star;
    } else {
      const auto rep = analytic_tune(base, a.alpha, a.alpha, std::nullopt, ctx);
      ctx.err << "no --r given; tuned R* = " << rep.r_star << '\n';
      params.r = rep.r_star;
    }
    const auto g = build_vamana(base, params);
    save_graph(g, resolve(a.out));
    summary = {{"algo", "vamana"}, {"n", g.n()}, {"r", params.r},
               {"alpha", params.alpha}, {"max_degree", g.max_degree()},
               {"mean_degree", g.mean_degree()}, {"medoid", g.medoid()}};
  } else {
    throw UsageError("unknown build algorithm '" + a.algo + "'");
  }
  summary["build_seconds"] = seconds_since(t0);
  ctx.out << summary.dump(2) << '\n';
  return kOk;
}

int cmd_tune(const TuneArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  const auto rep =
      analytic_tune(base, a.alpha1, a.alpha2, a.probe_subsample, ctx);
  const auto j = to_json(rep);
  ctx.err << "probe: n=" << rep.probe_n << " R=" << rep.r_probe << " in "
          << std::fixed << std::setprecision(2) << rep.probe_seconds << " s\n";
  ctx.out << j.dump(2) << '\n';
  if (!a.out.empty()) write_json(a.out, j);
  return kOk;
}

int cmd_search(const SearchArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  const auto g = load_graph(resolve(a.graph));
  check_graph_matches(g, base);
  const auto queries = read_fvecs(resolve(a.queries));
  if (queries.d() != base.d()) throw DimensionMismatch(base.d(), queries.d());
  const auto results = search_batch(g, base, queries, a.l, a.k, ctx.threads);
  std::vector<std::vector<std::int32_t>> ids;
  double hops = 0.0, expanded = 0.0;
  for (const auto& r : results) {
    auto& row = ids.emplace_back();
    for (const auto& nb : r.topk) row.push_back(static_cast<std::int32_t>(nb.id));
    hops += static_cast<double>(r.hops);
    expanded += static_cast<double>(r.visited.size());
  }
  if (!a.out.empty()) write_ivecs(ids, resolve(a.out));
  const double nq = static_cast<double>(queries.n());
  ctx.out << nlohmann::json{{"queries", queries.n()}, {"l", a.l}, {"k", a.k},
                            {"mean_hops", hops / nq},
                            {"mean_expanded", expanded / nq}}
                 .dump(2)
          << '\n';
  return kOk;
}

int cmd_bench(const BenchArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  const auto queries = read_fvecs(resolve(a.queries));
  if (queries.d() != base.d()) throw DimensionMismatch(base.d(), queries.d());
  if (a.ls.empty()) throw UsageError("--ls needs at least one list size");
  const GroundTruth gt =
      a.gt.empty() ? brute_force_knn(base, queries, a.k, ctx.threads)
                   : load_ground_truth(a.gt, base, queries, a.k);

  nlohmann::json tuning;
  std::optional<SngGraph> graph;
  if (!a.graph.empty()) {
    graph = load_graph(resolve(a.graph));
    check_graph_matches(*graph, base);
    tuning = {{"mode", "none"}, {"r", graph->r_cap().value_or(0)}};
  } else {
    std::uint32_t r = 0;
    const auto t0 = Clock::now();
    if (a.tuner == "analytic") {
      const auto rep = analytic_tune(base, a.alpha, a.alpha, a.probe_subsample, ctx);
      r = rep.r_star;
      tuning = to_json(rep);
    } else if (a.tuner == "binary-search") {
      GoldenSectionOptions opts;
      opts.r_lo = a.r_lo;
      opts.r_hi = a.r_hi;
      opts.alpha = a.alpha;
      opts.k = a.k;
      opts.latency_budget_us = a.latency_budget_us;
      opts.seed = ctx.seed;
      opts.threads = ctx.threads;
      const auto rep = golden_section_tune(base, queries, gt, opts);
      r = rep.r_best;
      tuning = {{"evaluations", rep.evaluations.size()},
                {"recall_at_best", rep.recall}};
    } else {
      throw UsageError("unknown tuner '" + a.tuner + "'");
    }
    tuning["mode"] = a.tuner;
    tuning["r"] = r;
    tuning["tuning_seconds"] = seconds_since(t0);
    BuildParams params;
    params.alpha = a.alpha;
    params.r = r;
    params.seed = ctx.seed;
    params.threads = ctx.threads;
    graph = build_vamana(base, params);
  }

  const auto rows = bench_sweep(*graph, base, queries, gt, a.ls, a.k);
  auto& o = ctx.out;
  o << "# tuner: " << tuning["mode"].get<std::string>() << ", R = "
    << tuning["r"] << '\n';
  o << "# latency: wall-clock microseconds per query, single thread, "
       "hardware-dependent\n";
  o << std::setw(6) << "L" << std::setw(12) << ("recall@" + std::to_string(a.k))
    << std::setw(14) << "mean_us" << std::setw(12) << "p99_us" << std::setw(11)
    << "hops" << std::setw(11) << "expanded" << std::setw(12) << "qps" << '\n';
  o << std::fixed;
  for (const auto& r : rows) {
    o << std::setw(6) << r.l << std::setw(12) << std::setprecision(4)
      << r.recall << std::setw(14) << std::setprecision(1) << r.mean_latency_us
      << std::setw(12) << r.p99_latency_us << std::setw(11)
      << std::setprecision(2) << r.mean_hops << std::setw(11)
      << r.mean_expanded << std::setw(12) << std::setprecision(0) << r.qps
      << '\n';
  }
  o.unsetf(std::ios::fixed);
  o << std::setprecision(6);

  if (!a.csv.empty()) {
    write_file(resolve(a.csv), [&](std::ostream& f) { write_bench_csv(f, rows); });
  }
  if (!a.json.empty()) {
    nlohmann::json j{{"tuning", tuning}, {"latency_unit", "us"}, {"rows", {}}};
    for (const auto& r : rows) j["rows"].push_back(to_json(r));
    write_json(a.json, j);
  }
  return kOk;
}

int cmd_trace(const TraceArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  if (a.owners.empty()) throw UsageError("--owners needs at least one id");
  std::vector<PruningTrace> traces;
  for (auto owner : a.owners) {
    PruningTrace& tr = traces.emplace_back();
    sng_neighbors(base, owner, a.alpha, a.r_cap, &tr);
    check_trace(tr);
  }
  if (a.csv.empty()) {
    write_trace_csv(ctx.out, traces);
  } else {
    write_file(resolve(a.csv), [&](std::ostream& f) { write_trace_csv(f, traces); });
    for (const auto& tr : traces) {
      ctx.out << "owner " << tr.owner << ": " << tr.rows.size()
              << " iterations, " << tr.processed(tr.rows.size()) << " of "
              << tr.candidates << " candidates processed\n";
    }
  }
  return kOk;
}

int cmd_degrees(const DegreesArgs& a, Context& ctx) {
  const auto g = load_graph(resolve(a.graph));
  const auto stats = degree_stats(g);
  auto j = to_json(stats);
  j["n"] = g.n();
  j["build"] = to_string(g.kind());
  ctx.out << j.dump(2) << '\n';
  if (!a.csv.empty()) {
    write_file(resolve(a.csv), [&](std::ostream& f) { write_degree_csv(f, stats); });
  }
  if (!a.json.empty()) write_json(a.json, j);
  return kOk;
}

int cmd_paths(const PathsArgs& a, Context& ctx) {
  const auto base = read_fvecs(resolve(a.base));
  const auto g = load_graph(resolve(a.graph));
  check_graph_matches(g, base);
  const auto queries = read_fvecs(resolve(a.queries));
  if (queries.d() != base.d()) throw DimensionMismatch(base.d(), queries.d());
  const auto stats = path_length_stats(g, base, queries, a.l, ctx.threads);
  const auto j = to_json(stats);
  ctx.out << j.dump(2) << '\n';
  if (!a.csv.empty()) {
    write_file(resolve(a.csv), [&](std::ostream& f) { write_path_csv(f, stats); });
  }
  if (!a.json.empty()) write_json(a.json, j);
  return kOk;
}

int cmd_verify(const VerifyArgs& a, Context& ctx) {
  VerifyOptions opts;
  opts.seed = ctx.seed;
  opts.threads = ctx.threads;
  if (!a.out_dir.empty()) {
    opts.out_dir = resolve(a.out_dir);
    fs::create_directories(*opts.out_dir);
  }
  const std::set<int> only(a.only.begin(), a.only.end());
  for (int id : only) {
    if (id < 1 || id > static_cast<int>(acceptance_criteria().size())) {
      throw UsageError("no criterion " + std::to_string(id));
    }
  }
  int failed = 0;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& c : acceptance_criteria()) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto r = run_criterion(c, opts);
    ctx.out << format_result_line(r) << std::endl;
    failed += !r.passed;
    all.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed},
                   {"seconds", r.seconds}, {"detail", r.detail},
                   {"metrics", r.metrics}});
  }
  if (opts.out_dir) write_json((*opts.out_dir / "verify.json").string(), all);
  ctx.out << (failed == 0 ? "ALL ACCEPTANCE CRITERIA PASSED"
                          : std::to_string(failed) + " CRITERIA FAILED")
          << '\n';
  return failed == 0 ? kOk : kCheckFailed;
}

}  // namespace sng::cli
