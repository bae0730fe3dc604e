#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "sng/dataset.hpp"

namespace sng {

/// Result of the truncation-parameter optimisation.
///
/// k_prime = alpha1^2 * r_bar / ln(probe_n) and
/// r_star  = round(k_prime * ln(n) / alpha2^2) clamped to [1, n - 1].
/// probe_n equals n unless the probe ran on a subsample.
struct TuneReport {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  std::uint32_t r_probe = 0;
  double r_bar = 0.0;
  double k_prime = 0.0;
  std::uint32_t r_star = 0;

  std::size_t n = 0;
  std::size_t probe_n = 0;
  double probe_seconds = 0.0;
};

/// Flat object with exactly alpha1, alpha2, r_probe, r_bar, k_prime, r_star.
nlohmann::json to_json(const TuneReport& report);
TuneReport tune_report_from_json(const nlohmann::json& j);

struct TuneOptions {
  std::uint64_t seed = 42;
  /// Probe on a seeded m-point subsample instead of the full dataset.
  std::optional<std::size_t> probe_subsample;
  /// Overrides the probe's search list size (default max(2R, 50)).
  std::optional<std::uint32_t> probe_l_build;
  unsigned threads = 1;
};

/// ceil(n^(2/3)), computed exactly in integers.
std::uint32_t probe_truncation(std::size_t n);

/// Builds a probe index with R = ceil(m^(2/3)) and alpha1 (m = n, or the
/// subsample size), measures its mean out-degree and derives R* for alpha2.
/// Throws PreconditionError unless alpha1, alpha2 >= 1 and n >= 8.
TuneReport optimize_r(const VectorDataset& ds, double alpha1, double alpha2,
                      const TuneOptions& options = {});

/// round(k_prime * ln(n) / alpha^2) clamped to [1, n - 1].
std::uint32_t marginal_optimal_r(std::size_t n, double alpha, double k_prime);
/// Same relation with ln(n) supplied directly.
std::uint32_t marginal_optimal_r_log(double log_n, std::size_t n, double alpha,
                                     double k_prime);

/// Implementation-dependent constants of the construction cost model.
struct CostConstants {
  double c1 = 1.0, b1 = 0.0;
  double c2 = 1.0, b2 = 0.0;
  double c3 = 1.0, b3 = 0.0;
};

/// n (C1 R ln n + b1 + C2 R^2 ln n / alpha + b2 + C3 alpha R^3 + b3):
/// candidate search, pruning, and reverse-edge overflow re-pruning.
double construction_cost(double n, double r, double alpha,
                         const CostConstants& k = {});

// Reference baseline: golden-section search over R scored by recall@k under
// a latency budget.

struct GoldenSectionOptions {
  std::uint32_t r_lo = 8;
  std::uint32_t r_hi = 0;  // 0 = probe_truncation(n)
  std::uint32_t width = 4; // stop once the bracket is at most this wide
  double alpha = 1.2;
  std::size_t search_l = 50;
  std::size_t k = 10;
  /// Per-query latency budget in microseconds; slower indices are penalised
  /// by (latency / budget - 1).
  double latency_budget_us = 0.0;
  std::uint64_t seed = 42;
  unsigned threads = 1;
};

struct GoldenSectionEvaluation {
  std::uint32_t r = 0;
  double recall = 0.0;
  double latency_us = 0.0;
  double score = 0.0;
};

struct GoldenSectionReport {
  std::uint32_t r_best = 0;
  double recall = 0.0;
  double latency_us = 0.0;
  double seconds = 0.0;
  std::vector<GoldenSectionEvaluation> evaluations;
};

GoldenSectionReport golden_section_tune(const VectorDataset& base,
                                        const VectorDataset& queries,
                                        const GroundTruth& gt,
                                        const GoldenSectionOptions& options);

}  // namespace sng
