#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "hawc/errors.hpp"

namespace hawc::cli {

namespace {

constexpr double kCanvas = 800.0;

struct Bounds {
  double lo_x = std::numeric_limits<double>::infinity();
  double hi_x = -std::numeric_limits<double>::infinity();
  double lo_y = std::numeric_limits<double>::infinity();
  double hi_y = -std::numeric_limits<double>::infinity();

  void add(const PointSet& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto p = pts[i];
      const double y = p.size() > 1 ? p[1] : 0.0;
      lo_x = std::min(lo_x, p[0]);
      hi_x = std::max(hi_x, p[0]);
      lo_y = std::min(lo_y, y);
      hi_y = std::max(hi_y, y);
    }
  }

  void pad() {
    auto widen = [](double& lo, double& hi) {
      double span = hi - lo;
      if (span <= 0.0) span = std::max(1.0, std::abs(lo));
      lo -= 0.1 * span;
      hi += 0.1 * span;
      if (hi - lo <= 0.0) {
        lo -= 1.0;
        hi += 1.0;
      }
    };
    widen(lo_x, hi_x);
    widen(lo_y, hi_y);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string render_scatter_svg(const PointSet& points, const PointSet& centers, ScatterStyle style) {
  if (points.empty()) throw InvalidArgument("plot: no points to draw");
  Bounds b;
  b.add(points);
  b.add(centers);
  b.pad();
  auto sx = [&](double x) { return (x - b.lo_x) / (b.hi_x - b.lo_x) * kCanvas; };
  // SVG y grows downward.
  auto sy = [&](double y) { return kCanvas - (y - b.lo_y) / (b.hi_y - b.lo_y) * kCanvas; };
  auto y_of = [](std::span<const double> p) { return p.size() > 1 ? p[1] : 0.0; };

  std::ostringstream svg;
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">)"
      << '\n';
  svg << R"(<rect x="0" y="0" width="800" height="800" fill="white"/>)" << '\n';
  if (b.lo_x < 0.0 && b.hi_x > 0.0) {
    svg << R"(<line class="axis" x1=")" << fmt(sx(0)) << R"(" y1="0" x2=")" << fmt(sx(0))
        << R"(" y2="800" stroke="#cccccc"/>)" << '\n';
  }
  if (b.lo_y < 0.0 && b.hi_y > 0.0) {
    svg << R"(<line class="axis" x1="0" y1=")" << fmt(sy(0)) << R"(" x2="800" y2=")" << fmt(sy(0))
        << R"(" stroke="#cccccc"/>)" << '\n';
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto c = centers[i];
    svg << R"(<circle class="center" cx=")" << fmt(sx(c[0])) << R"(" cy=")" << fmt(sy(y_of(c)))
        << R"(" r="6" fill="red"/>)" << '\n';
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    svg << R"(<circle class="point" cx=")" << fmt(sx(p[0])) << R"(" cy=")" << fmt(sy(y_of(p)))
        << R"(" r="4" fill="blue"/>)" << '\n';
    if (style.index_labels) {
      svg << R"(<text class="label" x=")" << fmt(sx(p[0]) + 6) << R"(" y=")" << fmt(sy(y_of(p)) - 6)
          << R"(" font-size="14" font-family="sans-serif">)" << (i + 1) << "</text>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hawc::cli
