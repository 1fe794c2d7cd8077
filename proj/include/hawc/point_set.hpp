#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hawc/errors.hpp"

namespace hawc {

/// Ordered list of points in R^N stored row-major in one contiguous buffer.
///
/// An empty set may have dimension 0 ("no dimension yet"); a nonempty set
/// always has dim() >= 1 and every row has exactly dim() coordinates.
class PointSet {
 public:
  PointSet() = default;

  explicit PointSet(std::size_t dim) : dim_(dim) {}

  PointSet(std::size_t dim, std::vector<double> coords)
      : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0 && !coords_.empty()) {
      throw InvalidArgument("PointSet: nonempty coordinates with dimension 0");
    }
    if (dim_ != 0 && coords_.size() % dim_ != 0) {
      throw InvalidArgument("PointSet: coordinate count " + std::to_string(coords_.size()) +
                            " is not a multiple of dimension " + std::to_string(dim_));
    }
  }

  /// Builds from explicit rows; all rows must share one nonzero length.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return PointSet{};
    PointSet out(rows.front().size());
    if (out.dim_ == 0) throw InvalidArgument("PointSet: zero-dimensional point");
    for (const auto& row : rows) out.push_back(row);
    return out;
  }

  static PointSet from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> tmp;
    tmp.reserve(rows.size());
    for (auto r : rows) tmp.emplace_back(r);
    return from_rows(tmp);
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] bool empty() const noexcept { return coords_.empty(); }

  [[nodiscard]] std::span<const double> operator[](std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] std::span<double> operator[](std::size_t i) noexcept {
    return {coords_.data() + i * dim_, dim_};
  }

  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] std::span<double> coords() noexcept { return coords_; }

  void reserve(std::size_t n) { coords_.reserve(n * dim_); }

  void push_back(std::span<const double> point) {
    if (empty() && dim_ == 0) dim_ = point.size();
    if (point.size() != dim_ || dim_ == 0) {
      throw InvalidArgument("PointSet: point of dimension " + std::to_string(point.size()) +
                            " added to set of dimension " + std::to_string(dim_));
    }
    coords_.insert(coords_.end(), point.begin(), point.end());
  }

  void append(const PointSet& other) {
    if (other.empty()) return;
    if (empty() && dim_ == 0) dim_ = other.dim_;
    if (other.dim_ != dim_) {
      throw InvalidArgument("PointSet: cannot append dimension " + std::to_string(other.dim_) +
                            " to dimension " + std::to_string(dim_));
    }
    coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
  }

  [[nodiscard]] std::vector<double> row(std::size_t i) const {
    auto r = (*this)[i];
    return {r.begin(), r.end()};
  }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

inline double squared_distance(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

inline double distance(std::span<const double> x, std::span<const double> y) noexcept {
  return std::sqrt(squared_distance(x, y));
}

inline double norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

/// Throws unless `a` and `b` share a dimension; empty sets match anything.
inline void require_same_dim(const PointSet& a, const PointSet& b, const char* what) {
  if (a.empty() || b.empty()) return;
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace hawc
