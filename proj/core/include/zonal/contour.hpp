#pragma once

#include <array>
#include <vector>

#include "zonal/dynamics.hpp"

namespace zonal {

/// Straight piece of a level curve, endpoints in the Cartesian eccentricity-vector plane.
struct ContourSegment {
  std::array<double, 2> p0{};
  std::array<double, 2> p1{};
};

struct ContourLine {
  double level = 0;
  std::vector<ContourSegment> segments;
};

/// Marching squares over a row-major grid with coordinates xs (columns) and ys (rows).
/// Cells touching a NaN are skipped; saddle cells are split by the cell-centre mean.
std::vector<ContourSegment> marching_squares(const std::vector<double>& values, const std::vector<double>& xs,
                                             const std::vector<double>& ys, double level);

/// count levels at evenly spaced quantiles of the unmasked values.
std::vector<double> contour_levels(const PhaseMap& map, int count);

/// Level curves of the map. Polar maps are traced in (e, w) with w wrapped, then mapped to (x, y).
std::vector<ContourLine> contour_map(const PhaseMap& map, int count);
std::vector<ContourLine> contour_map(const PhaseMap& map, const std::vector<double>& levels);

}  // namespace zonal
