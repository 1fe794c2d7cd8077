#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "hawc/errors.hpp"
#include "hawc/point_set.hpp"

namespace hawc {

/// Smoothed distance kernel h(r) = sqrt(a^2 + r^2) - a.
///
/// h is conditionally negative definite for every a >= 0, which is what
/// makes the pairwise-sum distance between mass-zero signed measures
/// nonnegative. With a > 0 the kernel is smooth at r = 0, so gradients are
/// defined even when two atoms coincide.
class Kernel {
 public:
  static constexpr double kDefaultA = 1e-6;

  constexpr Kernel() = default;

  explicit Kernel(double a) : a_(a) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw InvalidArgument("Kernel: smoothing parameter a must be finite and >= 0, got " +
                            std::to_string(a));
    }
  }

  [[nodiscard]] double a() const noexcept { return a_; }

  /// h(r); r must be >= 0.
  [[nodiscard]] double h(double r) const {
    if (!(r >= 0.0)) throw InvalidArgument("Kernel::h: negative or NaN radius");
    return h_unchecked(r);
  }

  /// h'(r) / r = 1 / sqrt(a^2 + r^2). When a = 0 and r = 0 the kink is
  /// resolved with the zero subgradient, so coincident atoms exert no force.
  [[nodiscard]] double h_prime_over_r(double r) const {
    if (!(r >= 0.0)) throw InvalidArgument("Kernel::h_prime_over_r: negative or NaN radius");
    return h_prime_over_r_unchecked(r);
  }

  // Hot-loop variants; callers guarantee r >= 0.
  [[nodiscard]] double h_unchecked(double r) const noexcept { return h_of_squared(r * r); }

  /// h as a function of r^2, one square root per call.
  [[nodiscard]] double h_of_squared(double r2) const noexcept {
    if (a_ == 0.0) return std::sqrt(r2);
    // sqrt(a^2 + r^2) - a rewritten to avoid cancellation for r << a.
    return r2 / (std::sqrt(a_ * a_ + r2) + a_);
  }

  [[nodiscard]] double h_prime_over_r_unchecked(double r) const noexcept {
    return h_prime_over_r_of_squared(r * r);
  }

  [[nodiscard]] double h_prime_over_r_of_squared(double r2) const noexcept {
    const double s = std::sqrt(a_ * a_ + r2);
    return s == 0.0 ? 0.0 : 1.0 / s;
  }

 private:
  double a_ = kDefaultA;
};

/// Checks h(|x - y|) <= h(|x|) + h(|y|) + a up to rounding. The inequality
/// holds for every pair; the function exists so tests can sweep it.
inline bool cnd_inequality_holds(const Kernel& kernel, std::span<const double> x,
                                 std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("cnd_inequality_holds: dimension mismatch");
  const double lhs = kernel.h(distance(x, y));
  const double rhs = kernel.h(norm(x)) + kernel.h(norm(y)) + kernel.a();
  return lhs <= rhs + 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + rhs);
}

}  // namespace hawc
