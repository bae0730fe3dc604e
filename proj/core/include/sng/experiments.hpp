#pragma once

// Desk-scale verification experiments. Each returns a pass/fail verdict with
// the measured numbers; thresholds are fixed here, not configurable.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace sng {

struct VerifyOptions {
  std::uint64_t seed = 42;
  unsigned threads = 1;
  /// Directory for CSV / JSON artefacts (degree histograms, hop tables).
  std::optional<std::filesystem::path> out_dir;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double time_limit_seconds = 0.0;  // 0 = no limit
  nlohmann::json metrics;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_seconds;
  std::function<CriterionResult(const VerifyOptions&)> run;
};

/// All acceptance criteria, in id order.
const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion, timing it and failing it if it exceeds its limit or
/// throws.
CriterionResult run_criterion(const Criterion& c, const VerifyOptions& options);

std::string format_result_line(const CriterionResult& r);

// Individual experiments.
CriterionResult verify_pruning_probability(const VerifyOptions&);
CriterionResult verify_fast_pruning_2d(const VerifyOptions&);
CriterionResult verify_degree_scaling(const VerifyOptions&);
CriterionResult verify_gmm_degrees(const VerifyOptions&);
CriterionResult verify_path_length(const VerifyOptions&);
CriterionResult verify_tuner_identity(const VerifyOptions&);
CriterionResult verify_oracle_equivalence(const VerifyOptions&);
CriterionResult verify_structural_invariants(const VerifyOptions&);
CriterionResult verify_end_to_end_recall(const VerifyOptions&);
CriterionResult verify_tuner_comparison(const VerifyOptions&);

}  // namespace sng
