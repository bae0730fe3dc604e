#include "sng/vecmath.hpp"

#include <cmath>
#include <random>
#include <string>

#include "sng/error.hpp"

namespace sng {

double sq_euclidean(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  return sq_dist(a.data(), b.data(), a.size());
}

PruneGeometry PruneGeometry::make(double ratio, int dim) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw DomainError("PruneGeometry: ratio must lie in (0, 1), got " +
                      std::to_string(ratio));
  }
  if (dim < 2) {
    throw DomainError("PruneGeometry: dim must be >= 2, got " +
                      std::to_string(dim));
  }
  return PruneGeometry(ratio, dim);
}

double pruning_probability_floor(int dim) {
  return 0.5 * reg_inc_beta(0.75, (dim + 1) / 2.0, 0.5);
}

double pruning_probability(const PruneGeometry& g, CapArgument arg) {
  const double d = static_cast<double>(g.dim());
  const double a = (d + 1.0) / 2.0;
  const double r = g.ratio();
  const double cap_offset = arg == CapArgument::kBisector ? r / 2.0 : r;
  const double cap = reg_inc_beta(1.0 - cap_offset * cap_offset, a, 0.5);
  const double inner = reg_inc_beta(0.75, a, 0.5);
  const double rd = std::pow(r, d);
  return (cap - rd * inner) / (2.0 * (1.0 - rd));
}

namespace {

// One uniform draw from the unit d-ball into `out`.
template <typename Rng>
void draw_unit_ball(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : out) {
      x = gauss(rng);
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double radius =
      std::pow(unif(rng), 1.0 / static_cast<double>(out.size()));
  const double scale = radius / std::sqrt(norm2);
  for (double& x : out) x *= scale;
}

}  // namespace

MonteCarloEstimate monte_carlo_prune_fraction(const PruneGeometry& g,
                                              std::size_t accepted,
                                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t d = static_cast<std::size_t>(g.dim());
  const double r = g.ratio();
  std::vector<double> x(d);
  MonteCarloEstimate est;
  std::size_t pruned = 0;
  while (est.accepted < accepted) {
    draw_unit_ball(rng, x);
    double to_p = 0.0;
    for (double v : x) to_p += v * v;
    if (to_p <= r * r) {
      ++est.rejected;
      continue;
    }
    ++est.accepted;
    const double last = x[d - 1] - r;
    const double to_nearest = to_p - x[d - 1] * x[d - 1] + last * last;
    if (to_p > to_nearest) ++pruned;
  }
  est.fraction = accepted == 0 ? 0.0
                               : static_cast<double>(pruned) /
                                     static_cast<double>(est.accepted);
  return est;
}

std::vector<float> sample_uniform_ball(std::size_t n, std::size_t d,
                                       double rho0, std::uint64_t seed) {
  if (n == 0 || d == 0 || !(rho0 > 0.0) || !std::isfinite(rho0)) {
    throw PreconditionError(
        "sample_uniform_ball: need n >= 1, d >= 1 and finite rho0 > 0");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> point(d);
  std::vector<float> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    draw_unit_ball(rng, point);
    float* row = out.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = static_cast<float>(point[j] * rho0);
    }
    // Rounding to float can nudge a boundary point just outside the ball.
    auto norm = [&] {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += double(row[j]) * double(row[j]);
      return std::sqrt(s);
    };
    while (norm() > rho0) {
      for (std::size_t j = 0; j < d; ++j) row[j] = std::nextafter(row[j], 0.0f);
    }
  }
  return out;
}

}  // namespace sng
