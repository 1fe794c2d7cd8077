#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hawc/distributions.hpp"
#include "hawc/errors.hpp"
#include "hawc/kernel.hpp"
#include "hawc/point_set.hpp"
#include "hawc/rng.hpp"
#include "hawc/signed_measure.hpp"

namespace hawc {

namespace detail {

/// Sample sizes up to this use the exact O(n^2) pair sum for the
/// sample-sample term; larger samples use the cyclic-offset estimator below.
inline constexpr std::size_t kExactSelfTermLimit = 4096;
inline constexpr std::size_t kSelfTermOffsets = 32;

/// V-statistic (1/n^2) sum_{s != s'} h(|s - s'|) of a sample. For large n,
/// the mean of h over the pairs (s_i, s_{i+j mod n}), j = 1..32, times
/// (n-1)/n; this has the same expectation at O(32 n) cost.
inline double sample_self_term(const PointSet& s, const Kernel& kernel) {
  const std::size_t n = s.size();
  if (n < 2) return 0.0;
  const auto nn = static_cast<double>(n);
  double acc = 0.0;
  if (n <= kExactSelfTermLimit) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) acc += kernel.h_of_squared(squared_distance(s[i], s[j]));
    }
    return 2.0 * acc / (nn * nn);
  }
  for (std::size_t j = 1; j <= kSelfTermOffsets; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < n; ++i) row += kernel.h_of_squared(squared_distance(s[i], s[(i + j) % n]));
    acc += row;
  }
  return acc / (nn * static_cast<double>(kSelfTermOffsets)) * (nn - 1.0) / nn;
}

}  // namespace detail

/// Monte-Carlo estimator of d(uniform(X), target)^2 against one fixed
/// sample S of the target, reusable across many point clouds X:
///   2/(K n) sum h(|x - s|) - 1/K^2 sum h(|x - x'|) - [S-S term].
/// For n <= 4096 the result equals distance_squared(uniform(X) - uniform(S));
/// above that the S-S term is estimated (see sample_self_term).
class EnergyDistanceEstimator {
 public:
  EnergyDistanceEstimator(const TargetDistribution& target, std::size_t n_samples,
                          const Kernel& kernel, SeededRng& rng)
      : kernel_(kernel) {
    if (n_samples < 2) throw InvalidArgument("energy distance: n_samples must be >= 2");
    samples_ = target.sample(n_samples, rng);
    if (n_samples > detail::kExactSelfTermLimit) {
      self_term_ = detail::sample_self_term(samples_, kernel_);
    }
  }

  [[nodiscard]] const PointSet& samples() const noexcept { return samples_; }

  [[nodiscard]] double operator()(const PointSet& points) const {
    if (points.empty()) throw InvalidArgument("energy distance: no points");
    if (points.dim() != samples_.dim()) {
      throw InvalidArgument("energy distance: points and target differ in dimension");
    }
    if (samples_.size() <= detail::kExactSelfTermLimit) {
      return distance_squared(combine(uniform(points), uniform(samples_), 1.0, -1.0), kernel_);
    }
    const auto k = static_cast<double>(points.size());
    const auto n = static_cast<double>(samples_.size());
    double cross = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto x = points[i];
      double row = 0.0;
      for (std::size_t s = 0; s < samples_.size(); ++s) {
        row += kernel_.h_of_squared(squared_distance(x, samples_[s]));
      }
      cross += row;
    }
    double self = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        self += kernel_.h_of_squared(squared_distance(points[i], points[j]));
      }
    }
    const double d2 = 2.0 * cross / (k * n) - 2.0 * self / (k * k) - self_term_;
    return std::max(d2, 0.0);
  }

 private:
  Kernel kernel_;
  PointSet samples_;
  double self_term_ = 0.0;
};

/// Draws n_samples target points from `rng` and estimates d(uniform(points), target)^2.
inline double mc_energy_distance_sq(const PointSet& points, const TargetDistribution& target,
                                    std::size_t n_samples, const Kernel& kernel, SeededRng& rng) {
  if (points.dim() != target.dim() && !points.empty()) {
    throw InvalidArgument("mc_energy_distance_sq: points and target differ in dimension");
  }
  return EnergyDistanceEstimator(target, n_samples, kernel, rng)(points);
}

/// Number of points whose nearest center is each center. Ties go to the
/// lowest center index.
inline std::vector<std::size_t> allocation_counts(const PointSet& points, const PointSet& centers) {
  if (points.empty() || centers.empty()) throw InvalidArgument("allocation_counts: empty input");
  require_same_dim(points, centers, "allocation_counts");
  std::vector<std::size_t> counts(centers.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = squared_distance(points[i], centers[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    ++counts[best];
  }
  return counts;
}

inline double min_pairwise_distance(const PointSet& points) {
  if (points.size() < 2) throw InvalidArgument("min_pairwise_distance: need at least 2 points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, squared_distance(points[i], points[j]));
    }
  }
  return std::sqrt(best);
}

/// Central-difference gradient of distance_squared with respect to the free
/// atoms, step rel_step * (1 + |coordinate|) per coordinate.
inline PointSet finite_difference_gradient(const SignedPointMeasure& q,
                                           std::span<const std::size_t> free_indices,
                                           const Kernel& kernel, double rel_step) {
  if (!(rel_step > 0.0)) throw InvalidArgument("finite_difference_gradient: rel_step must be > 0");
  const std::size_t dim = q.dim();
  PointSet grad(dim, std::vector<double>(free_indices.size() * dim, 0.0));
  const std::vector<double> weights(q.weights().begin(), q.weights().end());
  PointSet work = q.points();
  for (std::size_t r = 0; r < free_indices.size(); ++r) {
    const std::size_t k = free_indices[r];
    if (k >= q.size()) throw InvalidArgument("finite_difference_gradient: free index out of range");
    for (std::size_t d = 0; d < dim; ++d) {
      const double x0 = work[k][d];
      const double step = rel_step * (1.0 + std::abs(x0));
      work[k][d] = x0 + step;
      const double up = distance_squared(SignedPointMeasure(work, weights), kernel);
      work[k][d] = x0 - step;
      const double down = distance_squared(SignedPointMeasure(work, weights), kernel);
      work[k][d] = x0;
      grad[r][d] = (up - down) / (2.0 * step);
    }
  }
  return grad;
}

}  // namespace hawc
