#include "zonal/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zonal/errors.hpp"

namespace zonal {

namespace {

std::array<double, 2> lerp(double xa, double ya, double va, double xb, double yb, double vb, double level) {
  const double t = (vb == va) ? 0.5 : (level - va) / (vb - va);
  return {xa + t * (xb - xa), ya + t * (yb - ya)};
}

}  // namespace

std::vector<ContourSegment> marching_squares(const std::vector<double>& values, const std::vector<double>& xs,
                                             const std::vector<double>& ys, double level) {
  const std::size_t nx = xs.size(), ny = ys.size();
  if (values.size() != nx * ny) throw DomainError("marching_squares: grid size mismatch");
  std::vector<ContourSegment> out;
  if (nx < 2 || ny < 2) return out;
  for (std::size_t r = 0; r + 1 < ny; ++r) {
    for (std::size_t c = 0; c + 1 < nx; ++c) {
      // Corners counter-clockwise from (c, r).
      const double v0 = values[r * nx + c], v1 = values[r * nx + c + 1];
      const double v2 = values[(r + 1) * nx + c + 1], v3 = values[(r + 1) * nx + c];
      if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(v3)) continue;
      const double x0 = xs[c], x1 = xs[c + 1], y0 = ys[r], y1 = ys[r + 1];
      const int code = (v0 >= level ? 1 : 0) | (v1 >= level ? 2 : 0) | (v2 >= level ? 4 : 0) | (v3 >= level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const auto bottom = [&] { return lerp(x0, y0, v0, x1, y0, v1, level); };
      const auto right = [&] { return lerp(x1, y0, v1, x1, y1, v2, level); };
      const auto top = [&] { return lerp(x1, y1, v2, x0, y1, v3, level); };
      const auto left = [&] { return lerp(x0, y1, v3, x0, y0, v0, level); };
      auto add = [&](std::array<double, 2> a, std::array<double, 2> b) { out.push_back({a, b}); };
      switch (code) {
        case 1: case 14: add(left(), bottom()); break;
        case 2: case 13: add(bottom(), right()); break;
        case 3: case 12: add(left(), right()); break;
        case 4: case 11: add(right(), top()); break;
        case 6: case 9: add(bottom(), top()); break;
        case 7: case 8: add(left(), top()); break;
        case 5: case 10: {
          const bool centre_high = 0.25 * (v0 + v1 + v2 + v3) >= level;
          if ((code == 5) == centre_high) {
            add(left(), top());
            add(bottom(), right());
          } else {
            add(left(), bottom());
            add(right(), top());
          }
          break;
        }
        default: break;
      }
    }
  }
  return out;
}

std::vector<double> contour_levels(const PhaseMap& map, int count) {
  if (count < 1) return {};
  std::vector<double> v;
  for (std::size_t i = 0; i < map.values.size(); ++i)
    if (!map.mask[i]) v.push_back(map.values[i]);
  if (v.empty()) return {};
  std::sort(v.begin(), v.end());
  std::vector<double> levels;
  for (int k = 1; k <= count; ++k) {
    const double q = static_cast<double>(k) / (count + 1);
    const double level = v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))];
    if (levels.empty() || level != levels.back()) levels.push_back(level);
  }
  return levels;
}

std::vector<ContourLine> contour_map(const PhaseMap& map, int count) {
  return contour_map(map, contour_levels(map, count));
}

std::vector<ContourLine> contour_map(const PhaseMap& map, const std::vector<double>& levels) {
  std::vector<ContourLine> lines;
  const std::size_t n = static_cast<std::size_t>(map.resolution);
  for (double level : levels) {
    ContourLine line;
    line.level = level;
    if (map.chart == GridChart::cartesian) {
      line.segments = marching_squares(map.values, map.axis0, map.axis1, level);
    } else {
      // Append the first w row again so the seam at w = pi is traced.
      std::vector<double> values = map.values;
      values.insert(values.end(), map.values.begin(), map.values.begin() + static_cast<std::ptrdiff_t>(n));
      std::vector<double> ws = map.axis1;
      ws.push_back(map.axis1.front() + 2.0 * std::numbers::pi);
      for (ContourSegment s : marching_squares(values, map.axis0, ws, level)) {
        auto to_xy = [](const std::array<double, 2>& p) {
          return std::array<double, 2>{p[0] * std::cos(p[1]), p[0] * std::sin(p[1])};
        };
        line.segments.push_back({to_xy(s.p0), to_xy(s.p1)});
      }
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace zonal
