#pragma once

// Reference computations used only by tests. They deliberately avoid the
// library's code paths: plain row vectors, full double loops over all
// (k, l) pairs, and the kernel written out in its textbook form.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace hawc::oracle {

using Row = std::vector<double>;

inline double textbook_h(double a, double r) { return std::sqrt(a * a + r * r) - a; }

inline double euclid(const Row& x, const Row& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

/// -sum_{k,l} p_k p_l h(|z_k - z_l|) over every ordered pair, diagonal included.
inline double naive_distance_squared(const std::vector<Row>& z, const std::vector<double>& p, double a) {
  double s = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    for (std::size_t l = 0; l < z.size(); ++l) s += p[k] * p[l] * textbook_h(a, euclid(z[k], z[l]));
  }
  return -s;
}

// Closed-form standard normal moments: E|Z| and E|Z - Z'| for Z, Z' i.i.d. N(0,1).
inline const double kMeanAbsNormal = std::sqrt(2.0 / std::numbers::pi);
inline const double kMeanAbsDiffNormal = 2.0 / std::sqrt(std::numbers::pi);
/// d(delta_0, N(0,1))^2 for a = 0: 2 E|Z| - E|Z - Z'| - 0.
inline const double kPointToNormalEnergy = 2.0 * kMeanAbsNormal - kMeanAbsDiffNormal;

/// Upper quartile of N(0,1), Phi^{-1}(0.75). Minimizer of the 1D K=1, K_p=1
/// loss -2|t| + 4 E|t - Z| satisfies 2(2 Phi(t) - 1) = 1.
inline constexpr double kNormalUpperQuartile = 0.6744897501960817;

/// Random signed measure with weights projected to zero total mass.
struct RandomMeasure {
  std::vector<Row> points;
  std::vector<double> weights;
};

inline RandomMeasure random_mass_zero_measure(std::mt19937_64& gen, std::size_t dim, std::size_t n,
                                              double spread = 2.0) {
  std::uniform_real_distribution<double> coord(-spread, spread);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);
  RandomMeasure m;
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    Row r(dim);
    for (auto& v : r) v = coord(gen);
    m.points.push_back(r);
    m.weights.push_back(weight(gen));
    mean += m.weights.back();
  }
  mean /= static_cast<double>(n);
  for (auto& w : m.weights) w -= mean;
  return m;
}

}  // namespace hawc::oracle
