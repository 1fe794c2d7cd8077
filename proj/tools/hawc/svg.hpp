#pragma once

#include <string>

#include "hawc/point_set.hpp"

namespace hawc::cli {

struct ScatterStyle {
  bool index_labels = false;  ///< label point i with "i+1"
};

/// Standalone 800x800 SVG scatter of the first two coordinates: centers as
/// red circles (class "center"), points as blue circles (class "point").
/// Axes cover the data with a 10% margin on each side.
std::string render_scatter_svg(const PointSet& points, const PointSet& centers, ScatterStyle style);

}  // namespace hawc::cli
