#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hawc/errors.hpp"
#include "hawc/kernel.hpp"
#include "hawc/point_set.hpp"

namespace hawc {

/// Finite signed discrete measure sum_k w_k delta_{z_k}.
class SignedPointMeasure {
 public:
  /// Absolute tolerance on |total mass| for a valid difference measure.
  static constexpr double kMassTolerance = 1e-9;
  /// Negative squared distances down to this value are rounding and clamp to 0.
  static constexpr double kNegativeClamp = 1e-9;

  SignedPointMeasure() = default;

  SignedPointMeasure(PointSet points, std::vector<double> weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.size() != weights_.size()) {
      throw InvalidArgument("SignedPointMeasure: " + std::to_string(points_.size()) +
                            " points but " + std::to_string(weights_.size()) + " weights");
    }
  }

  [[nodiscard]] const PointSet& points() const noexcept { return points_; }
  [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return points_.dim(); }
  [[nodiscard]] bool empty() const noexcept { return weights_.empty(); }

  [[nodiscard]] double total_mass() const noexcept {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
  }

 private:
  PointSet points_;
  std::vector<double> weights_;
};

/// Uniform probability measure (1/K each) on a nonempty point list.
inline SignedPointMeasure uniform(const PointSet& points) {
  if (points.empty()) throw InvalidArgument("uniform: empty point list");
  const double w = 1.0 / static_cast<double>(points.size());
  return {points, std::vector<double>(points.size(), w)};
}

/// c1 * m1 + c2 * m2, atoms concatenated in order (m1 first).
inline SignedPointMeasure combine(const SignedPointMeasure& m1, const SignedPointMeasure& m2,
                                  double c1, double c2) {
  require_same_dim(m1.points(), m2.points(), "combine");
  PointSet points = m1.points();
  points.append(m2.points());
  std::vector<double> weights;
  weights.reserve(m1.size() + m2.size());
  for (double w : m1.weights()) weights.push_back(c1 * w);
  for (double w : m2.weights()) weights.push_back(c2 * w);
  return {std::move(points), std::move(weights)};
}

namespace detail {

inline void require_mass_zero(const SignedPointMeasure& q, const char* what) {
  const double mass = q.total_mass();
  if (!(std::abs(mass) <= SignedPointMeasure::kMassTolerance)) {
    throw InvalidArgument(std::string(what) +
                          ": difference measure must have zero total mass, got " +
                          std::to_string(mass));
  }
}

/// Atom order used for summation: lexicographic in coordinates, then weight.
/// Summing in this order makes the result independent of how the caller
/// ordered the atoms.
inline std::vector<std::size_t> canonical_order(const SignedPointMeasure& q) {
  std::vector<std::size_t> order(q.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& pts = q.points();
  const auto w = q.weights();
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto pi = pts[i];
    const auto pj = pts[j];
    for (std::size_t d = 0; d < pi.size(); ++d) {
      if (pi[d] != pj[d]) return pi[d] < pj[d];
    }
    return w[i] < w[j];
  });
  return order;
}

}  // namespace detail

/// Squared kernel distance d^2 = -sum_{k,l} w_k w_l h(|z_k - z_l|) of a
/// mass-zero difference measure q = eta1 - eta2.
///
/// Atoms at identical coordinates are merged first (their weights summed),
/// which leaves d^2 unchanged since h(0) = 0 and makes d(eta, eta) exactly 0.
/// Pairs are then visited once in canonical order and doubled. Results in
/// [-1e-9, 0) clamp to 0.
inline double distance_squared(const SignedPointMeasure& q, const Kernel& kernel) {
  detail::require_mass_zero(q, "distance_squared");
  if (q.size() < 2) return 0.0;
  const auto order = detail::canonical_order(q);
  const auto& pts = q.points();
  const auto w = q.weights();

  std::vector<std::size_t> atom;
  std::vector<double> weight;
  atom.reserve(order.size());
  weight.reserve(order.size());
  for (std::size_t i : order) {
    if (!atom.empty()) {
      const auto prev = pts[atom.back()];
      const auto cur = pts[i];
      if (std::equal(prev.begin(), prev.end(), cur.begin())) {
        weight.back() += w[i];
        continue;
      }
    }
    atom.push_back(i);
    weight.push_back(w[i]);
  }

  const std::size_t n = atom.size();
  double acc = 0.0;
  for (std::size_t a = 0; a + 1 < n; ++a) {
    if (weight[a] == 0.0) continue;
    const auto zi = pts[atom[a]];
    double row = 0.0;
    for (std::size_t b = a + 1; b < n; ++b) {
      row += weight[b] * kernel.h_of_squared(squared_distance(zi, pts[atom[b]]));
    }
    acc += weight[a] * row;
  }
  const double d2 = -2.0 * acc;
  if (d2 <= 0.0 && d2 >= -SignedPointMeasure::kNegativeClamp) return 0.0;
  return d2;
}

/// Analytic gradient of distance_squared with respect to the atoms listed in
/// `free_indices`; row r of the result is d(d^2)/dz_{free_indices[r]}:
///   -2 w_k sum_{l != k} w_l h'(|z_k - z_l|)/|z_k - z_l| (z_k - z_l).
inline PointSet distance_squared_gradient(const SignedPointMeasure& q,
                                          std::span<const std::size_t> free_indices,
                                          const Kernel& kernel) {
  detail::require_mass_zero(q, "distance_squared_gradient");
  const std::size_t n = q.size();
  const std::size_t dim = q.dim();
  const auto& pts = q.points();
  const auto w = q.weights();

  PointSet grad(dim, std::vector<double>(free_indices.size() * dim, 0.0));
  std::vector<double> diff(dim);
  for (std::size_t r = 0; r < free_indices.size(); ++r) {
    const std::size_t k = free_indices[r];
    if (k >= n) {
      throw InvalidArgument("distance_squared_gradient: free index " + std::to_string(k) +
                            " out of range for " + std::to_string(n) + " atoms");
    }
    const auto zk = pts[k];
    auto gk = grad[r];
    for (std::size_t l = 0; l < n; ++l) {
      if (l == k) continue;
      const auto zl = pts[l];
      double r2 = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        diff[d] = zk[d] - zl[d];
        r2 += diff[d] * diff[d];
      }
      const double c = w[l] * kernel.h_prime_over_r_of_squared(r2);
      for (std::size_t d = 0; d < dim; ++d) gk[d] += c * diff[d];
    }
    for (double& g : gk) g *= -2.0 * w[k];
  }
  return grad;
}

}  // namespace hawc
