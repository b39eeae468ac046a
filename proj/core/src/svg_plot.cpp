#include "zonal/svg_plot.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "zonal/contour.hpp"

namespace zonal {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Blue-to-red ramp.
std::string colour(double t) {
  t = std::fmin(1.0, std::fmax(0.0, t));
  const int r = static_cast<int>(std::lround(40 + 200 * t));
  const int g = static_cast<int>(std::lround(70 + 80 * (1 - std::abs(2 * t - 1))));
  const int b = static_cast<int>(std::lround(220 - 190 * t));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_svg(const PhaseMap& map, const SvgOptions& options) {
  const double size = options.size;
  const double margin = 40.0;
  const double centre = size / 2.0;
  const double scale = (size / 2.0 - margin) / map.e_max;
  auto px = [&](double x) { return num(centre + x * scale); };
  auto py = [&](double y) { return num(centre - y * scale); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.size << "\" height=\"" << options.size
      << "\" viewBox=\"0 0 " << options.size << ' ' << options.size << "\">\n";
  out << "<defs><clipPath id=\"disk\"><circle cx=\"" << num(centre) << "\" cy=\"" << num(centre) << "\" r=\""
      << num(map.e_max * scale) << "\"/></clipPath></defs>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<circle cx=\"" << num(centre) << "\" cy=\"" << num(centre) << "\" r=\"" << num(map.e_max * scale)
      << "\" fill=\"#f7f7f7\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (map.feasible_limit < map.e_max)
    out << "<circle cx=\"" << num(centre) << "\" cy=\"" << num(centre) << "\" r=\"" << num(map.feasible_limit * scale)
        << "\" fill=\"none\" stroke=\"#999999\" stroke-width=\"4\"/>\n";

  // Polar guides every 30 deg and at quarter radii.
  out << "<g stroke=\"#dddddd\" stroke-width=\"0.5\" fill=\"none\">\n";
  for (int k = 1; k <= 4; ++k)
    out << "<circle cx=\"" << num(centre) << "\" cy=\"" << num(centre) << "\" r=\"" << num(map.e_max * scale * k / 4)
        << "\"/>\n";
  for (int k = 0; k < 12; ++k) {
    const double w = k * std::numbers::pi / 6;
    out << "<line x1=\"" << num(centre) << "\" y1=\"" << num(centre) << "\" x2=\"" << px(map.e_max * std::cos(w))
        << "\" y2=\"" << py(map.e_max * std::sin(w)) << "\"/>\n";
  }
  out << "</g>\n";

  const auto lines = contour_map(map, options.levels);
  out << "<g clip-path=\"url(#disk)\" fill=\"none\" stroke-width=\"1\">\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].segments.empty()) continue;
    const double t = lines.size() > 1 ? static_cast<double>(i) / (lines.size() - 1) : 0.5;
    out << "<path stroke=\"" << colour(t) << "\" d=\"";
    for (const ContourSegment& s : lines[i].segments)
      out << 'M' << px(s.p0[0]) << ' ' << py(s.p0[1]) << 'L' << px(s.p1[0]) << ' ' << py(s.p1[1]);
    out << "\"/>\n";
  }
  out << "</g>\n";

  if (map.e_impact > 0 && map.e_impact <= map.e_max)
    out << "<circle cx=\"" << num(centre) << "\" cy=\"" << num(centre) << "\" r=\"" << num(map.e_impact * scale)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";

  out << "<g>\n";
  for (const FrozenOrbit& o : map.frozen) {
    const double x = o.e * std::cos(o.omega), y = o.e * std::sin(o.omega);
    const std::string cx = px(x), cy = py(y);
    if (o.stability == Stability::center) {
      out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"black\"/>\n";
    } else if (o.stability == Stability::saddle) {
      const double X = centre + x * scale, Y = centre - y * scale;
      out << "<path stroke=\"black\" stroke-width=\"2\" d=\"M" << num(X - 5) << ' ' << num(Y - 5) << 'L' << num(X + 5)
          << ' ' << num(Y + 5) << 'M' << num(X - 5) << ' ' << num(Y + 5) << 'L' << num(X + 5) << ' ' << num(Y - 5)
          << "\"/>\n";
    } else {
      out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
    }
  }
  out << "</g>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  out << "<text x=\"" << px(map.e_max) << "\" y=\"" << num(centre - 4) << "\" text-anchor=\"end\">w=0</text>\n";
  out << "<text x=\"" << num(centre + 4) << "\" y=\"" << py(map.e_max) << "\" dominant-baseline=\"hanging\">w=90</text>\n";
  out << "<text x=\"" << num(centre + 4) << "\" y=\"" << num(centre - 4) << "\">e_max=" << num(map.e_max) << "</text>\n";
  if (options.title) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "a = %.1f km, I = %.2f deg, degrees 2-%d, e_impact = %.4f", map.a,
                  map.inclination_circular * 180.0 / std::numbers::pi, map.n_max, map.e_impact);
    out << "<text x=\"" << num(margin / 2) << "\" y=\"" << num(margin / 2) << "\" font-size=\"13\">" << buf
        << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace zonal
