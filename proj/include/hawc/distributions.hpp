#pragma once

#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "hawc/errors.hpp"
#include "hawc/point_io.hpp"
#include "hawc/point_set.hpp"
#include "hawc/rng.hpp"

namespace hawc {

struct StandardGaussian {
  std::size_t dim = 2;
};

/// Uniform mixture of isotropic 2D Gaussians centered on a rows x cols
/// lattice whose centroid is the origin.
struct GridMixture {
  std::size_t rows = 4;
  std::size_t cols = 4;
  double spacing = 1.0;
  double sigma = 0.2;
};

struct Empirical {
  PointSet atoms;
};

/// Lattice centers (i*spacing, j*spacing) shifted so their centroid is the
/// origin; row-major in (i, j).
inline PointSet grid_centers(const GridMixture& g) {
  PointSet centers(2);
  centers.reserve(g.rows * g.cols);
  const double off_x = 0.5 * static_cast<double>(g.rows - 1) * g.spacing;
  const double off_y = 0.5 * static_cast<double>(g.cols - 1) * g.spacing;
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) {
      const double p[2] = {static_cast<double>(i) * g.spacing - off_x,
                           static_cast<double>(j) * g.spacing - off_y};
      centers.push_back(p);
    }
  }
  return centers;
}

class TargetDistribution {
 public:
  using Variant = std::variant<StandardGaussian, GridMixture, Empirical>;

  static TargetDistribution gaussian(std::size_t dim) {
    if (dim < 1) throw InvalidArgument("gaussian target: dim must be >= 1");
    return TargetDistribution(StandardGaussian{dim});
  }

  static TargetDistribution grid(std::size_t rows, std::size_t cols, double spacing, double sigma) {
    if (rows < 1 || cols < 1) throw InvalidArgument("grid target: rows and cols must be >= 1");
    if (!(spacing > 0.0)) throw InvalidArgument("grid target: spacing must be > 0");
    if (!(sigma > 0.0)) throw InvalidArgument("grid target: sigma must be > 0");
    return TargetDistribution(GridMixture{rows, cols, spacing, sigma});
  }

  static TargetDistribution empirical(PointSet atoms) {
    if (atoms.empty()) throw InvalidArgument("empirical target: no atoms");
    return TargetDistribution(Empirical{std::move(atoms)});
  }

  [[nodiscard]] const Variant& variant() const noexcept { return v_; }

  [[nodiscard]] const GridMixture* as_grid() const noexcept { return std::get_if<GridMixture>(&v_); }

  [[nodiscard]] std::size_t dim() const noexcept {
    return std::visit(
        [](const auto& d) -> std::size_t {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, StandardGaussian>) return d.dim;
          else if constexpr (std::is_same_v<T, GridMixture>) return 2;
          else return d.atoms.dim();
        },
        v_);
  }

  /// `count` i.i.d. draws consuming `rng`.
  [[nodiscard]] PointSet sample(std::size_t count, SeededRng& rng) const {
    const std::size_t n = dim();
    std::vector<double> coords;
    coords.reserve(count * n);
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, StandardGaussian>) {
            for (std::size_t i = 0; i < count * n; ++i) coords.push_back(rng.standard_normal());
          } else if constexpr (std::is_same_v<T, GridMixture>) {
            const double off_x = 0.5 * static_cast<double>(d.rows - 1) * d.spacing;
            const double off_y = 0.5 * static_cast<double>(d.cols - 1) * d.spacing;
            for (std::size_t s = 0; s < count; ++s) {
              const auto cell = rng.uniform_index(d.rows * d.cols);
              const double cx = static_cast<double>(cell / d.cols) * d.spacing - off_x;
              const double cy = static_cast<double>(cell % d.cols) * d.spacing - off_y;
              coords.push_back(cx + d.sigma * rng.standard_normal());
              coords.push_back(cy + d.sigma * rng.standard_normal());
            }
          } else {
            for (std::size_t s = 0; s < count; ++s) {
              const auto atom = d.atoms[rng.uniform_index(d.atoms.size())];
              coords.insert(coords.end(), atom.begin(), atom.end());
            }
          }
        },
        v_);
    return {n, std::move(coords)};
  }

 private:
  explicit TargetDistribution(Variant v) : v_(std::move(v)) {}

  Variant v_;
};

/// Empirical target over the rows of a point CSV file.
inline TargetDistribution load_empirical(const std::string& path) {
  PointSet atoms = read_points_file(path);
  if (atoms.empty()) throw IoError("empirical target file '" + path + "' contains no points");
  return TargetDistribution::empirical(std::move(atoms));
}

}  // namespace hawc
