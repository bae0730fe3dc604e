#include "sng/tuner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "sng/error.hpp"
#include "sng/graph.hpp"
#include "sng/instrument.hpp"

namespace sng {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Round half away from zero, treating values within a few ulps of a half
// as exactly the half so that k' ln n / a^2 reproduces a mean degree that
// was itself x.5.
double round_stable(double v) {
  const double half = std::floor(v) + 0.5;
  if (std::fabs(v - half) <= 1e-9 * std::max(1.0, std::fabs(v))) {
    return std::floor(v) + 1.0;
  }
  return std::round(v);
}

}  // namespace

nlohmann::json to_json(const TuneReport& r) {
  return {{"alpha1", r.alpha1}, {"alpha2", r.alpha2}, {"r_probe", r.r_probe},
          {"r_bar", r.r_bar},   {"k_prime", r.k_prime}, {"r_star", r.r_star}};
}

TuneReport tune_report_from_json(const nlohmann::json& j) {
  TuneReport r;
  r.alpha1 = j.at("alpha1").get<double>();
  r.alpha2 = j.at("alpha2").get<double>();
  r.r_probe = j.at("r_probe").get<std::uint32_t>();
  r.r_bar = j.at("r_bar").get<double>();
  r.k_prime = j.at("k_prime").get<double>();
  r.r_star = j.at("r_star").get<std::uint32_t>();
  return r;
}

std::uint32_t probe_truncation(std::size_t n) {
  if (n == 0) return 0;
  const auto n2 = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  auto r = static_cast<std::uint64_t>(
      std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0)));
  while (r > 0 && (r - 1) * (r - 1) * (r - 1) >= n2) --r;
  while (r * r * r < n2) ++r;
  return static_cast<std::uint32_t>(r);
}

std::uint32_t marginal_optimal_r_log(double log_n, std::size_t n, double alpha,
                                     double k_prime) {
  if (n < 2) throw PreconditionError("marginal_optimal_r: need n >= 2");
  if (!(alpha > 0.0)) throw PreconditionError("marginal_optimal_r: alpha <= 0");
  const double upper = static_cast<double>(n - 1);
  const double value = round_stable(k_prime * log_n / (alpha * alpha));
  if (!(value >= 1.0)) return 1;  // also catches NaN
  if (value >= upper) return static_cast<std::uint32_t>(n - 1);
  return static_cast<std::uint32_t>(value);
}

std::uint32_t marginal_optimal_r(std::size_t n, double alpha, double k_prime) {
  return marginal_optimal_r_log(std::log(static_cast<double>(n)), n, alpha,
                                k_prime);
}

TuneReport optimize_r(const VectorDataset& ds, double alpha1, double alpha2,
                      const TuneOptions& options) {
  if (!(alpha1 >= 1.0) || !(alpha2 >= 1.0)) {
    throw PreconditionError("optimize_r: alpha1 and alpha2 must be >= 1");
  }
  const std::size_t n = ds.n();
  if (n < 8) throw PreconditionError("optimize_r: need n >= 8");

  const auto start = Clock::now();
  TuneReport report;
  report.alpha1 = alpha1;
  report.alpha2 = alpha2;
  report.n = n;

  std::optional<VectorDataset> sample;
  if (options.probe_subsample && *options.probe_subsample < n) {
    const std::size_t m = *options.probe_subsample;
    if (m < 8) throw PreconditionError("optimize_r: probe subsample < 8");
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(m);
    std::sort(ids.begin(), ids.end());
    sample = ds.subset(ids, ds.source() + "[probe]");
  }
  const VectorDataset& probe = sample ? *sample : ds;
  report.probe_n = probe.n();

  report.r_probe = std::min<std::uint32_t>(
      probe_truncation(probe.n()), static_cast<std::uint32_t>(probe.n() - 1));
  BuildParams params;
  params.alpha = alpha1;
  params.r = report.r_probe;
  params.seed = options.seed;
  params.threads = options.threads;
  if (options.probe_l_build) {
    params.l_build = std::max(*options.probe_l_build, report.r_probe);
  }
  const SngGraph graph = build_vamana(probe, params);

  report.r_bar = graph.mean_degree();
  report.k_prime = alpha1 * alpha1 * report.r_bar /
                   std::log(static_cast<double>(probe.n()));
  report.r_star = marginal_optimal_r(n, alpha2, report.k_prime);
  report.probe_seconds = seconds_since(start);
  return report;
}

double construction_cost(double n, double r, double alpha,
                         const CostConstants& k) {
  if (!(r >= 1.0) || !(alpha >= 1.0) || !(n > 0.0)) {
    throw PreconditionError("construction_cost: need n > 0, r >= 1, alpha >= 1");
  }
  const double log_n = std::log(n);
  const double search = k.c1 * r * log_n + k.b1;
  const double prune = k.c2 * (r * r * log_n / alpha) + k.b2;
  const double overflow = k.c3 * (alpha * r * r * r) + k.b3;
  return n * (search + prune + overflow);
}

GoldenSectionReport golden_section_tune(const VectorDataset& base,
                                        const VectorDataset& queries,
                                        const GroundTruth& gt,
                                        const GoldenSectionOptions& options) {
  const auto start = Clock::now();
  std::uint32_t lo = std::max<std::uint32_t>(1, options.r_lo);
  std::uint32_t hi = options.r_hi ? options.r_hi : probe_truncation(base.n());
  hi = std::min<std::uint32_t>(hi, static_cast<std::uint32_t>(base.n() - 1));
  if (lo > hi) throw PreconditionError("golden_section_tune: empty R range");

  GoldenSectionReport report;
  std::map<std::uint32_t, GoldenSectionEvaluation> cache;
  auto evaluate = [&](std::uint32_t r) -> const GoldenSectionEvaluation& {
    if (auto it = cache.find(r); it != cache.end()) return it->second;
    BuildParams params;
    params.alpha = options.alpha;
    params.r = r;
    params.seed = options.seed;
    params.threads = options.threads;
    const SngGraph g = build_vamana(base, params);
    const std::size_t l = std::max(options.search_l, options.k);
    const auto t0 = Clock::now();
    const auto results = search_batch(g, base, queries, l, options.k,
                                      options.threads);
    const double elapsed = seconds_since(t0);
    std::vector<std::vector<std::uint32_t>> ids(results.size());
    for (std::size_t q = 0; q < results.size(); ++q) {
      for (const Neighbor& nb : results[q].topk) ids[q].push_back(nb.id);
    }
    GoldenSectionEvaluation e;
    e.r = r;
    e.recall = recall_at_k(ids, gt, options.k);
    e.latency_us = 1e6 * elapsed / static_cast<double>(queries.n());
    e.score = e.recall;
    if (options.latency_budget_us > 0.0 &&
        e.latency_us > options.latency_budget_us) {
      e.score -= e.latency_us / options.latency_budget_us - 1.0;
    }
    report.evaluations.push_back(e);
    return cache.emplace(r, e).first->second;
  };

  constexpr double kInvPhi = 0.6180339887498949;
  const std::uint32_t width = std::max<std::uint32_t>(1, options.width);
  while (hi - lo > width) {
    const auto span = static_cast<double>(hi - lo);
    auto c = static_cast<std::uint32_t>(std::lround(hi - kInvPhi * span));
    auto d = static_cast<std::uint32_t>(std::lround(lo + kInvPhi * span));
    if (c >= d) d = c + 1;
    if (evaluate(c).score >= evaluate(d).score) {
      hi = d;
    } else {
      lo = c;
    }
  }
  evaluate(lo + (hi - lo) / 2);

  const GoldenSectionEvaluation* best = nullptr;
  for (const auto& [r, e] : cache) {
    if (!best || e.score > best->score) best = &e;
  }
  report.r_best = best->r;
  report.recall = best->recall;
  report.latency_us = best->latency_us;
  report.seconds = seconds_since(start);
  return report;
}

}  // namespace sng
