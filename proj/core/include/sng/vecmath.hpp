#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sng {

/// Squared Euclidean distance, accumulated in double precision.
///
/// All graph algorithms compare this monotone surrogate instead of the true
/// distance. Throws DimensionMismatch when the spans differ in length.
double sq_euclidean(std::span<const float> a, std::span<const float> b);

// Unchecked kernel used on hot paths where the dimension is known to agree.
inline double sq_dist(const float* a, const float* b, std::size_t d) noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += diff * diff;
  }
  return acc;
}

/// Regularized incomplete Beta function I_x(a, b), the Beta(a, b) CDF.
///
/// Evaluated with the Lentz continued fraction, switching to the reflected
/// expansion 1 - I_{1-x}(b, a) when x > (a + 1) / (a + b + 2). Throws
/// DomainError unless x is in [0, 1] and a, b are finite and positive.
double reg_inc_beta(double x, double a, double b);

/// Geometry of one pruning step around a centre point p: the nearest
/// survivor sits at distance ratio * rho0 from p and the remaining candidates
/// are uniform in the ball of radius rho0.
class PruneGeometry {
 public:
  /// Throws DomainError unless 0 < ratio < 1 and dim >= 2.
  static PruneGeometry make(double ratio, int dim);

  double ratio() const noexcept { return ratio_; }
  int dim() const noexcept { return dim_; }

 private:
  PruneGeometry(double ratio, int dim) : ratio_(ratio), dim_(dim) {}
  double ratio_;
  int dim_;
};

/// Which Beta argument the pruned-cap term uses.
///
/// kBisector places the pruning hyperplane at half the nearest-neighbour
/// distance, giving 1 - (ratio / 2)^2. kUnhalved is the variant without the
/// halving, 1 - ratio^2, kept only for comparison runs.
enum class CapArgument { kBisector, kUnhalved };

/// Probability that a candidate drawn uniformly from the shell
/// rho_t < |x| <= rho0 is pruned by the nearest survivor (alpha = 1):
///
///   [I_{1-(r/2)^2}((d+1)/2, 1/2) - r^d I_{3/4}((d+1)/2, 1/2)] / (2 (1 - r^d))
///
/// with r = ratio. For the bisector form the result lies strictly between
/// pruning_probability_floor(d) and 1/2.
double pruning_probability(const PruneGeometry& g,
                           CapArgument arg = CapArgument::kBisector);

/// I_{3/4}((d+1)/2, 1/2) / 2, the ratio -> 1 infimum of pruning_probability.
double pruning_probability_floor(int dim);

struct MonteCarloEstimate {
  double fraction = 0.0;     // pruned / accepted
  std::size_t accepted = 0;  // samples outside the inner ball
  std::size_t rejected = 0;  // samples that fell inside radius ratio
};

/// Rejection-sampling estimate of the single-step prune fraction.
///
/// Samples uniformly in the unit ball with p at the origin and the nearest
/// survivor at (0, ..., 0, ratio), discards samples with |x| <= ratio, and
/// counts |x| > |x - p*| among the `accepted` kept samples. Independent of the
/// closed form above; used as its oracle.
MonteCarloEstimate monte_carlo_prune_fraction(const PruneGeometry& g,
                                              std::size_t accepted,
                                              std::uint64_t seed);

/// n i.i.d. points uniform in the d-ball of radius rho0, row-major.
/// Gaussian direction scaled by rho0 * U^(1/d). Deterministic in `seed`.
std::vector<float> sample_uniform_ball(std::size_t n, std::size_t d,
                                       double rho0, std::uint64_t seed);

}  // namespace sng
