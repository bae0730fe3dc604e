#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sng {

/// One pruning iteration around an owner point.
struct TraceRow {
  std::size_t t = 0;       // iteration index, starting at 1
  std::size_t s_size = 0;  // candidates left after the step
  std::size_t delta = 0;   // candidates pruned (the selected neighbour excluded)
  double rho = 0.0;        // Euclidean distance owner -> selected neighbour
};

/// Record of the candidate-set process for one owner. Every step removes the
/// selected neighbour plus `delta` pruned points, so
/// processed(t) = sum_{i<=t} (delta_i + 1) = candidates - s_size(t).
struct PruningTrace {
  std::uint32_t owner = 0;
  std::size_t candidates = 0;  // |S_0|, i.e. n - 1 for a full build
  std::vector<TraceRow> rows;

  /// Points processed after iteration t (processed(0) == 0).
  std::size_t processed(std::size_t t) const;
  /// True when the candidate set ran empty (non-truncated termination).
  bool exhausted() const noexcept {
    return !rows.empty() && rows.back().s_size == 0;
  }
};

/// Throws InvariantViolation if the row sequence breaks the bookkeeping
/// identities: t = 1, 2, ...; s_size strictly decreasing; rho nondecreasing;
/// processed(t) == candidates - s_size(t).
void check_trace(const PruningTrace& trace);

}  // namespace sng
