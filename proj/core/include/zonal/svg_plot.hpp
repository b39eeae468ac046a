#pragma once

#include <string>

#include "zonal/dynamics.hpp"

namespace zonal {

struct SvgOptions {
  int size = 640;     ///< px, square canvas
  int levels = 24;
  bool title = true;
};

/// Polar rendering of a phase map: contours, dashed impact circle, masked region,
/// and frozen orbits (dot = center, cross = saddle, ring = degenerate).
/// Output depends only on the map and options.
std::string render_svg(const PhaseMap& map, const SvgOptions& options = {});

}  // namespace zonal
