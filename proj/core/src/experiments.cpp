#include "sng/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "sng/dataset.hpp"
#include "sng/error.hpp"
#include "sng/graph.hpp"
#include "sng/instrument.hpp"
#include "sng/report.hpp"
#include "sng/tuner.hpp"
#include "sng/vecmath.hpp"

namespace sng {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

template <typename Fn>
void emit_artifact(const VerifyOptions& opt, const std::string& name, Fn&& fn) {
  if (!opt.out_dir) return;
  std::filesystem::create_directories(*opt.out_dir);
  write_file(*opt.out_dir / name, fn);
}

std::vector<std::uint32_t> seeded_sample(std::size_t n, std::size_t m,
                                         std::uint64_t seed) {
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(std::min(n, m));
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::uint32_t> prefix_ids(std::size_t n) {
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  return ids;
}

std::vector<std::vector<std::uint32_t>> topk_ids(
    const std::vector<SearchResult>& results) {
  std::vector<std::vector<std::uint32_t>> ids(results.size());
  for (std::size_t q = 0; q < results.size(); ++q) {
    for (const Neighbor& nb : results[q].topk) ids[q].push_back(nb.id);
  }
  return ids;
}

// Tuned R for an experiment dataset: alpha1 = alpha2 = alpha, optionally on
// a probe subsample.
TuneReport tune(const VectorDataset& ds, double alpha, std::uint64_t seed,
                std::optional<std::size_t> subsample, unsigned threads) {
  TuneOptions opt;
  opt.seed = seed;
  opt.probe_subsample = subsample;
  opt.threads = threads;
  return optimize_r(ds, alpha, alpha, opt);
}

// Thresholds, fixed.
constexpr double kMonteCarloSigmas = 3.0;
constexpr std::size_t kMonteCarloSamples = 100000;
constexpr double kDegreeSlopeLimit = 0.8;
constexpr double kHopsMinRSquared = 0.9;
constexpr double kHopsIncrementTolerance = 0.5;
constexpr double kRecallFloor = 0.95;
constexpr double kIdentityRelTol = 1e-9;
constexpr double kAlpha = 1.2;
constexpr std::size_t kProbeSubsample = 5000;

}  // namespace

CriterionResult verify_pruning_probability(const VerifyOptions& opt) {
  CriterionResult r;
  r.passed = true;
  std::size_t misses = 0;
  std::size_t idx = 0;
  for (int d : {2, 4, 8, 16}) {
    for (double ratio : {0.2, 0.5, 0.8}) {
      const auto g = PruneGeometry::make(ratio, d);
      const double analytic = pruning_probability(g);
      const double floor = pruning_probability_floor(d);
      const auto mc = monte_carlo_prune_fraction(g, kMonteCarloSamples,
                                                 opt.seed + 7919 * ++idx);
      const double se = std::sqrt(analytic * (1.0 - analytic) /
                                  static_cast<double>(mc.accepted));
      const double z = std::fabs(mc.fraction - analytic) / se;
      const bool within = z <= kMonteCarloSigmas;
      const bool bounded = floor < analytic && analytic < 0.5;
      if (!within || !bounded) {
        r.passed = false;
        ++misses;
      }
      r.metrics["grid"].push_back({{"d", d},
                                   {"ratio", ratio},
                                   {"analytic", analytic},
                                   {"monte_carlo", mc.fraction},
                                   {"std_error", se},
                                   {"z", z},
                                   {"floor", floor},
                                   {"bounded", bounded}});
    }
  }
  r.detail = std::to_string(12 - misses) + "/12 grid points within " +
             fmt(kMonteCarloSigmas, 0) + " SE and inside (floor, 1/2)";
  return r;
}

CriterionResult verify_fast_pruning_2d(const VerifyOptions& opt) {
  constexpr std::size_t kN = 10000;
  constexpr int kRuns = 100;
  constexpr int kRequired = 95;
  constexpr std::size_t kMaxPassage = 4;
  const auto level =
      static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(kN - 1)));

  CriterionResult r;
  int good = 0;
  std::map<std::size_t, int> passage_counts;
  for (int run = 0; run < kRuns; ++run) {
    const auto ds = gen_uniform_ball(kN, 2, 1.0, opt.seed + 1000 + run);
    std::uint32_t centre = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < kN; ++i) {
      const auto x = ds.row(i);
      const double norm2 = double(x[0]) * x[0] + double(x[1]) * x[1];
      if (norm2 < best) {
        best = norm2;
        centre = i;
      }
    }
    PruningTrace trace;
    sng_neighbors(ds, centre, 1.0, std::nullopt, &trace);
    check_trace(trace);
    const auto t = mt_first_passage(trace, level);
    if (!t) throw InvariantViolation("non-truncated trace did not terminate");
    ++passage_counts[*t];
    if (*t <= kMaxPassage) ++good;
  }
  for (const auto& [t, count] : passage_counts) {
    r.metrics["first_passage_histogram"][std::to_string(t)] = count;
  }
  r.metrics["runs_within_4"] = good;
  r.passed = good >= kRequired;
  r.detail = std::to_string(good) + "/" + std::to_string(kRuns) +
             " runs reach the " + std::to_string(level) +
             " level by t <= 4 (need >= " + std::to_string(kRequired) + ")";
  return r;
}

CriterionResult verify_degree_scaling(const VerifyOptions& opt) {
  constexpr std::size_t kOwners = 200;
  constexpr double kNu = 0.8;
  CriterionResult r;
  std::vector<double> log_n, log_max;
  std::map<std::size_t, std::vector<PruningTrace>> traces_by_n;
  for (std::size_t n : {10000u, 20000u, 40000u, 80000u}) {
    const auto ds = gen_uniform_ball(n, 8, 1.0, opt.seed + n);
    const auto owners = seeded_sample(n, kOwners, opt.seed ^ n);
    std::vector<PruningTrace> traces;
    const SngGraph g = build_full_sng(ds, kAlpha, owners, opt.threads, &traces);
    std::size_t max_deg = 0;
    double mean = 0.0;
    for (std::uint32_t p : owners) {
      const std::size_t deg = g.neighbors(p).size();
      max_deg = std::max(max_deg, deg);
      mean += static_cast<double>(deg);
    }
    for (const auto& trace : traces) {
      check_trace(trace);
      if (!trace.exhausted() || trace.rows.size() != g.neighbors(trace.owner).size()) {
        throw InvariantViolation("degree != iteration count in full SNG");
      }
    }
    mean /= static_cast<double>(owners.size());
    log_n.push_back(std::log(static_cast<double>(n)));
    log_max.push_back(std::log(static_cast<double>(max_deg)));
    r.metrics["points"].push_back(
        {{"n", n}, {"max_degree", max_deg}, {"mean_degree", mean}});
    traces_by_n.emplace(n, std::move(traces));
  }
  const LineFit fit = fit_line(log_n, log_max);
  const ProgressReport progress = sublinear_progress_check(traces_by_n, kNu);
  r.metrics["slope"] = fit.slope;
  r.metrics["sublinear_progress"] = {{"nu", kNu},
                                     {"slope", progress.slope},
                                     {"flagged", progress.flagged}};
  r.passed = fit.slope <= kDegreeSlopeLimit;
  r.detail = "log-log slope of max sampled degree vs n = " + fmt(fit.slope) +
             " (limit " + fmt(kDegreeSlopeLimit, 2) + ")";
  return r;
}

CriterionResult verify_gmm_degrees(const VerifyOptions& opt) {
  CriterionResult r;
  const auto all = gen_gmm(100000, 8, 10, 0.05, opt.seed);
  auto [base, queries] = split_dataset(all, 0.9, opt.seed);
  const TuneReport tuned =
      tune(base, kAlpha, opt.seed, kProbeSubsample, opt.threads);
  BuildParams params;
  params.alpha = kAlpha;
  params.r = tuned.r_star;
  params.seed = opt.seed;
  params.threads = opt.threads;
  const SngGraph g = build_vamana(base, params);
  const DegreeStats stats = degree_stats(g);
  const double bound = std::pow(static_cast<double>(base.n()), 2.0 / 3.0);

  const GroundTruth gt = brute_force_knn(base, queries, 10, opt.threads);
  const double recall =
      recall_at_k(topk_ids(search_batch(g, base, queries, 50, 10, opt.threads)),
                  gt, 10);

  emit_artifact(opt, "gmm_degree_histogram.csv",
                [&](std::ostream& out) { write_degree_csv(out, stats); });
  r.metrics["tune"] = to_json(tuned);
  r.metrics["degrees"] = to_json(stats);
  r.metrics["bound_n_two_thirds"] = bound;
  r.metrics["recall_at_10_l50"] = recall;
  r.metrics["reference"] = "max < 100, mode in [50, 60] (unspecified spread)";
  r.passed = static_cast<double>(stats.max) < bound;
  r.detail = "R*=" + std::to_string(tuned.r_star) +
             ", max degree " + std::to_string(stats.max) + " < n^(2/3) = " +
             fmt(bound, 1) + ", mode " +
             r.metrics["degrees"]["mode"].dump() + ", recall@10 " +
             fmt(recall);
  return r;
}

CriterionResult verify_path_length(const VerifyOptions& opt) {
  constexpr std::size_t kQueries = 1000;
  constexpr std::size_t kSearchL = 50;
  const std::vector<std::size_t> sizes = {5000, 10000, 20000, 40000};
  CriterionResult r;
  // Nested prefixes of one draw, one shared query set.
  const auto pool = gen_uniform_ball(sizes.back(), 8, 1.0, opt.seed);
  const auto queries = gen_uniform_ball(kQueries, 8, 1.0, opt.seed + 1);
  std::vector<double> log_n, mean_hops;
  std::vector<nlohmann::json> rows;
  for (std::size_t n : sizes) {
    const auto ds = pool.subset(prefix_ids(n), pool.source() + "[prefix]");
    const TuneReport tuned =
        tune(ds, kAlpha, opt.seed, kProbeSubsample, opt.threads);
    BuildParams params;
    params.alpha = kAlpha;
    params.r = tuned.r_star;
    params.seed = opt.seed;
    params.threads = opt.threads;
    const SngGraph g = build_vamana(ds, params);
    const PathLengthStats stats =
        path_length_stats(g, ds, queries, kSearchL, opt.threads);
    log_n.push_back(std::log(static_cast<double>(n)));
    mean_hops.push_back(stats.mean_hops);
    r.metrics["points"].push_back({{"n", n},
                                   {"r_star", tuned.r_star},
                                   {"mean_hops", stats.mean_hops},
                                   {"p99_hops", stats.p99_hops}});
  }
  const LineFit fit = fit_line(log_n, mean_hops);
  bool increments_ok = true;
  std::vector<double> inc;
  for (std::size_t i = 1; i < mean_hops.size(); ++i) {
    inc.push_back(mean_hops[i] - mean_hops[i - 1]);
  }
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (!(inc[i] > 0.0)) increments_ok = false;
    if (i > 0 && std::fabs(inc[i] - inc[i - 1]) >
                     kHopsIncrementTolerance * std::fabs(inc[i - 1])) {
      increments_ok = false;
    }
  }
  emit_artifact(opt, "path_lengths.csv", [&](std::ostream& out) {
    out << "n,mean_hops\n";
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      out << sizes[i] << ',' << mean_hops[i] << '\n';
    }
  });
  r.metrics["fit"] = {{"intercept", fit.intercept},
                      {"slope", fit.slope},
                      {"r_squared", fit.r_squared}};
  r.metrics["increments"] = inc;
  r.passed = fit.r_squared >= kHopsMinRSquared && increments_ok;
  std::string incs;
  for (double v : inc) incs += (incs.empty() ? "" : ", ") + fmt(v, 3);
  r.detail = "mean hops = " + fmt(fit.intercept, 3) + " + " +
             fmt(fit.slope, 3) + " ln n, R^2 = " + fmt(fit.r_squared) +
             "; per-doubling increments [" + incs + "]";
  return r;
}

CriterionResult verify_tuner_identity(const VerifyOptions& opt) {
  CriterionResult r;
  r.passed = true;
  struct Case {
    std::string name;
    VectorDataset ds;
  };
  std::vector<Case> cases;
  cases.push_back({"uniform-600x8", gen_uniform_ball(600, 8, 1.0, opt.seed)});
  cases.push_back({"uniform-400x2", gen_uniform_ball(400, 2, 1.0, opt.seed + 1)});
  cases.push_back({"gmm-800x4", gen_gmm(800, 4, 5, 0.1, opt.seed + 2)});
  cases.push_back({"uniform-50x3", gen_uniform_ball(50, 3, 1.0, opt.seed + 3)});

  std::size_t checks = 0, failures = 0;
  auto rel = [](double a, double b) {
    return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
  };
  for (const Case& c : cases) {
    for (auto [a1, a2] : {std::pair{1.0, 1.0}, std::pair{1.2, 1.2},
                          std::pair{1.2, 1.5}, std::pair{1.5, 1.0}}) {
      TuneOptions topt;
      topt.seed = opt.seed;
      topt.threads = opt.threads;
      const TuneReport t = optimize_r(c.ds, a1, a2, topt);
      const double ln_n = std::log(static_cast<double>(c.ds.n()));
      const double k_expected = a1 * a1 * t.r_bar / ln_n;
      const double raw = t.k_prime * ln_n / (a2 * a2);
      const auto r_expected = static_cast<std::uint32_t>(std::clamp<double>(
          std::round(raw), 1.0, static_cast<double>(c.ds.n() - 1)));
      bool ok = rel(t.k_prime, k_expected) <= kIdentityRelTol &&
                t.r_star == r_expected &&
                t.r_star == marginal_optimal_r(c.ds.n(), a2, t.k_prime);
      if (a1 == a2) ok = ok && t.r_star == std::round(t.r_bar);
      ++checks;
      if (!ok) {
        ++failures;
        r.passed = false;
      }
      r.metrics["cases"].push_back({{"dataset", c.name},
                                    {"report", to_json(t)},
                                    {"ok", ok}});
    }
  }
  r.detail = std::to_string(checks - failures) + "/" + std::to_string(checks) +
             " tuner runs satisfy k' and R* identities (alpha1 = alpha2 => "
             "R* = round(mean degree))";
  return r;
}

CriterionResult verify_oracle_equivalence(const VerifyOptions& opt) {
  CriterionResult r;
  std::size_t search_ok = 0, prune_ok = 0;
  constexpr std::size_t kInstances = 20;
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const std::size_t d = 2 + inst % 7;
    const auto ds = gen_uniform_ball(50, d, 1.0, opt.seed + 31 * inst);
    Adjacency complete(ds.n());
    for (std::uint32_t v = 0; v < ds.n(); ++v) {
      for (std::uint32_t u = 0; u < ds.n(); ++u) {
        if (u != v) complete[v].push_back(u);
      }
    }
    const SngGraph g(d, std::move(complete), 1.0, std::nullopt, 0,
                     BuildKind::kRandomRegular);
    const auto queries = gen_uniform_ball(5, d, 1.2, opt.seed + 31 * inst + 1);
    const GroundTruth gt = brute_force_knn(ds, queries, 10);
    bool all = true;
    for (std::size_t q = 0; q < queries.n(); ++q) {
      const auto start = static_cast<std::uint32_t>((inst * 7 + q * 13) % 50);
      const SearchResult res =
          greedy_search(g, ds, queries.row(q), start, ds.n(), 10);
      all = all && res.topk == gt.rows[q];
    }
    search_ok += all;
  }
  for (std::size_t inst = 0; inst < kInstances; ++inst) {
    const std::size_t d = 2 + inst % 7;
    const auto ds = gen_uniform_ball(300, d, 1.0, opt.seed + 97 * inst);
    bool all = true;
    for (std::uint32_t p : {0u, 57u, 123u, 299u}) {
      std::vector<std::uint32_t> rest;
      for (std::uint32_t j = 0; j < ds.n(); ++j) {
        if (j != p) rest.push_back(j);
      }
      for (double alpha : {1.0, 1.2, 1.5}) {
        all = all && robust_prune(ds, p, rest, alpha, 299) ==
                         sng_neighbors(ds, p, alpha, std::nullopt);
        all = all && robust_prune(ds, p, rest, alpha, 5) ==
                         sng_neighbors(ds, p, alpha, 5u);
      }
    }
    prune_ok += all;
  }
  r.passed = search_ok == kInstances && prune_ok == kInstances;
  r.metrics = {{"greedy_vs_brute_force", search_ok},
               {"robust_prune_vs_sng_neighbors", prune_ok}};
  r.detail = "greedy_search == brute_force_knn on " +
             std::to_string(search_ok) + "/20, robust_prune == sng_neighbors on " +
             std::to_string(prune_ok) + "/20";
  return r;
}

namespace {

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

CriterionResult verify_structural_invariants(const VerifyOptions& opt) {
  CriterionResult r;
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  const auto ds = gen_uniform_ball(2000, 8, 1.0, opt.seed);
  std::size_t prune_outputs = 0, prune_violations = 0;
  auto observer = [&](std::uint32_t v, std::span<const std::uint32_t> row) {
    ++prune_outputs;
    if (!satisfies_prune_order(ds, v, row, kAlpha)) ++prune_violations;
  };
  for (unsigned threads : {1u, 2u}) {
    BuildParams params;
    params.alpha = kAlpha;
    params.r = 24;
    params.seed = opt.seed;
    params.threads = threads;
    const SngGraph g = build_vamana(ds, params, observer);
    check_structure(g.adjacency(), g.r_cap());
    expect(g.max_degree() <= 24, "vamana degree cap");
  }
  expect(prune_violations == 0, "alpha-pruning order of vamana prune outputs");

  const auto small = gen_uniform_ball(500, 4, 1.0, opt.seed + 1);
  std::vector<PruningTrace> traces;
  const SngGraph full = build_full_sng(small, kAlpha, std::nullopt, opt.threads,
                                       &traces);
  check_structure(full.adjacency(), std::nullopt);
  for (std::uint32_t p = 0; p < small.n(); ++p) {
    expect(satisfies_prune_order(small, p, full.neighbors(p), kAlpha),
           "alpha-pruning order of full-sng row " + std::to_string(p));
  }
  for (const PruningTrace& t : traces) {
    check_trace(t);
    expect(t.exhausted() && t.processed(t.rows.size()) == small.n() - 1,
           "terminal processed set != n - 1 for owner " +
               std::to_string(t.owner));
    expect(t.rows.size() == full.neighbors(t.owner).size(),
           "iteration count != degree for owner " + std::to_string(t.owner));
  }

  const auto dir = std::filesystem::temp_directory_path() /
                   ("sng_verify_" + std::to_string(opt.seed));
  std::filesystem::create_directories(dir);
  const auto vec = gen_uniform_ball(100, 16, 1.0, opt.seed + 2);
  write_fvecs(vec, dir / "a.fvecs");
  write_fvecs(read_fvecs(dir / "a.fvecs"), dir / "b.fvecs");
  expect(read_bytes(dir / "a.fvecs") == read_bytes(dir / "b.fvecs"),
         "fvecs round-trip");
  const GroundTruth gt = brute_force_knn(vec, vec, 7);
  write_ivecs(gt.ids(), dir / "a.ivecs");
  write_ivecs(read_ivecs(dir / "a.ivecs"), dir / "b.ivecs");
  expect(read_bytes(dir / "a.ivecs") == read_bytes(dir / "b.ivecs") &&
             read_ivecs(dir / "a.ivecs") == gt.ids(),
         "ivecs round-trip");
  save_graph(full, dir / "a.sng");
  const SngGraph loaded = load_graph(dir / "a.sng");
  save_graph(loaded, dir / "b.sng");
  expect(loaded == full &&
             read_bytes(dir / "a.sng") == read_bytes(dir / "b.sng"),
         "graph file round-trip");
  std::filesystem::remove_all(dir);

  r.passed = failures.empty();
  r.metrics = {{"vamana_prune_outputs_checked", prune_outputs},
               {"full_sng_traces_checked", traces.size()},
               {"failures", failures}};
  r.detail = failures.empty()
                 ? "all structural, trace and round-trip checks hold (" +
                       std::to_string(prune_outputs) +
                       " vamana prune outputs, " +
                       std::to_string(traces.size()) + " traces)"
                 : "failed: " + failures.front();
  return r;
}

CriterionResult verify_end_to_end_recall(const VerifyOptions& opt) {
  CriterionResult r;
  const auto base = gen_uniform_ball(10000, 8, 1.0, opt.seed);
  const auto queries = gen_uniform_ball(1000, 8, 1.0, opt.seed + 1);
  const TuneReport tuned = tune(base, kAlpha, opt.seed, std::nullopt, opt.threads);
  BuildParams params;
  params.alpha = kAlpha;
  params.r = tuned.r_star;
  params.seed = opt.seed;
  params.threads = opt.threads;
  const SngGraph g = build_vamana(base, params);
  const GroundTruth gt = brute_force_knn(base, queries, 10, opt.threads);
  const double recall =
      recall_at_k(topk_ids(search_batch(g, base, queries, 50, 10, opt.threads)),
                  gt, 10);
  r.metrics = {{"tune", to_json(tuned)}, {"recall_at_10", recall}};
  r.passed = recall >= kRecallFloor;
  r.detail = "R*=" + std::to_string(tuned.r_star) + ", L=50 recall@10 = " +
             fmt(recall) + " (need >= " + fmt(kRecallFloor, 2) + ")";
  return r;
}

CriterionResult verify_tuner_comparison(const VerifyOptions& opt) {
  CriterionResult r;
  const auto base = gen_uniform_ball(10000, 8, 1.0, opt.seed);
  const auto queries = gen_uniform_ball(1000, 8, 1.0, opt.seed + 1);
  const GroundTruth gt = brute_force_knn(base, queries, 10, opt.threads);

  const auto t0 = Clock::now();
  const TuneReport tuned = tune(base, kAlpha, opt.seed, std::nullopt, opt.threads);
  const double analytic_tune_s = seconds_since(t0);
  BuildParams params;
  params.alpha = kAlpha;
  params.r = tuned.r_star;
  params.seed = opt.seed;
  params.threads = opt.threads;
  const auto t1 = Clock::now();
  const SngGraph g = build_vamana(base, params);
  const double analytic_build_s = seconds_since(t1);
  const std::size_t ls[] = {50};
  const BenchRow analytic = bench_sweep(g, base, queries, gt, ls, 10).front();

  GoldenSectionOptions gopt;
  gopt.alpha = kAlpha;
  gopt.search_l = 50;
  gopt.k = 10;
  gopt.latency_budget_us = analytic.mean_latency_us;
  gopt.seed = opt.seed;
  gopt.threads = opt.threads;
  const GoldenSectionReport golden = golden_section_tune(base, queries, gt, gopt);

  const double speedup = golden.seconds / analytic_tune_s;
  r.metrics = {{"analytic",
                {{"r_star", tuned.r_star},
                 {"tuning_seconds", analytic_tune_s},
                 {"build_seconds", analytic_build_s},
                 {"recall_at_10", analytic.recall},
                 {"latency_us", analytic.mean_latency_us}}},
               {"golden_section",
                {{"r_best", golden.r_best},
                 {"tuning_seconds", golden.seconds},
                 {"evaluations", golden.evaluations.size()},
                 {"recall_at_10", golden.recall},
                 {"latency_us", golden.latency_us}}},
               {"tuning_speedup", speedup},
               {"note", "wall-clock, hardware-dependent; not asserted"}};
  const bool sane = std::isfinite(speedup) && analytic.recall >= 0.0 &&
                    analytic.recall <= 1.0 && golden.recall >= 0.0 &&
                    golden.recall <= 1.0 && golden.r_best >= 1 &&
                    !golden.evaluations.empty();
  r.passed = sane;
  r.detail = "analytic R*=" + std::to_string(tuned.r_star) + " in " +
             fmt(analytic_tune_s, 2) + "s (recall " + fmt(analytic.recall) +
             "), golden-section R=" + std::to_string(golden.r_best) + " in " +
             fmt(golden.seconds, 2) + "s (recall " + fmt(golden.recall) +
             "), tuning speedup " + fmt(speedup, 2) + "x";
  return r;
}

const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> all = {
      {1, "pruning probability vs Monte Carlo", 60.0,
       verify_pruning_probability},
      {2, "2-d fast pruning (0.8(n-1) level by t <= 4)", 60.0,
       verify_fast_pruning_2d},
      {3, "max degree scaling slope <= 0.8", 600.0, verify_degree_scaling},
      {4, "GMM degree distribution", 900.0, verify_gmm_degrees},
      {5, "logarithmic path length", 600.0, verify_path_length},
      {6, "truncation optimizer identities", 0.0, verify_tuner_identity},
      {7, "oracle equivalence", 0.0, verify_oracle_equivalence},
      {8, "structural invariants and round-trips", 0.0,
       verify_structural_invariants},
      {9, "end-to-end recall@10 >= 0.95", 120.0, verify_end_to_end_recall},
      {10, "analytic vs golden-section tuning harness", 0.0,
       verify_tuner_comparison},
  };
  return all;
}

CriterionResult run_criterion(const Criterion& c, const VerifyOptions& options) {
  const auto start = Clock::now();
  CriterionResult r;
  try {
    r = c.run(options);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = c.id;
  r.name = c.name;
  r.seconds = seconds_since(start);
  r.time_limit_seconds = c.time_limit_seconds;
  if (c.time_limit_seconds > 0.0 && r.seconds >= c.time_limit_seconds) {
    r.passed = false;
    r.detail += " [exceeded " + fmt(c.time_limit_seconds, 0) + "s limit]";
  }
  return r;
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << " ("
     << r.name << "): " << r.detail << " [" << fmt(r.seconds, 1) << "s]";
  return os.str();
}

}  // namespace sng
