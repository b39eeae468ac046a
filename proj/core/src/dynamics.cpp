#include "zonal/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "zonal/errors.hpp"

namespace zonal {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();
constexpr double root_floor = 1e-6;
constexpr double dedupe_distance = 1e-6;
constexpr double degenerate_ratio = 1e-4;  ///< |smaller eigenvalue| / |larger| below which a point is degenerate

template <typename Body>
void parallel_rows(int rows, unsigned threads, Body&& body) {
  unsigned n = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n = std::min<unsigned>(n, static_cast<unsigned>(std::max(rows, 1)));
  if (n <= 1) {
    for (int r = 0; r < rows; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t)
    pool.emplace_back([&] {
      for (int r = next++; r < rows; r = next++) body(r);
    });
}

FrozenOrbit describe(const ReducedHamiltonian& k, double x, double y, double e_impact) {
  FrozenOrbit o;
  o.e = std::hypot(x, y);
  o.omega = o.e == 0.0 ? 0.0 : std::atan2(y, x);
  const auto g = k.gradient(x, y);
  const auto h = k.hessian(x, y);
  o.gradient_norm = std::hypot(g[0], g[1]);
  o.omega_derivative = -y * g[0] + x * g[1];
  o.hessian_det = h[0] * h[2] - h[1] * h[1];
  o.hessian_trace = h[0] + h[2];
  const double split = std::hypot(h[0] - h[2], 2.0 * h[1]);
  const double lam_big = 0.5 * (std::abs(o.hessian_trace) + split);
  const double lam_small = std::abs(o.hessian_det) / lam_big;
  if (!(lam_small > degenerate_ratio * lam_big))
    o.stability = Stability::degenerate;
  else
    o.stability = o.hessian_det > 0 ? Stability::center : Stability::saddle;
  o.value = k.kepler_term() + k.perturbation_at(x, y);
  o.impact = o.e >= e_impact;
  o.n_max = k.model().spec().n_max;
  return o;
}

void deduplicate(std::vector<FrozenOrbit>& orbits) {
  std::vector<FrozenOrbit> kept;
  for (const FrozenOrbit& o : orbits) {
    const double x = o.e * std::cos(o.omega), y = o.e * std::sin(o.omega);
    auto same = std::find_if(kept.begin(), kept.end(), [&](const FrozenOrbit& q) {
      if (o.stability == Stability::degenerate && q.stability == Stability::degenerate &&
          std::abs(o.e - q.e) < dedupe_distance)
        return true;
      return std::hypot(q.e * std::cos(q.omega) - x, q.e * std::sin(q.omega) - y) < dedupe_distance;
    });
    if (same == kept.end())
      kept.push_back(o);
    else if (o.gradient_norm < same->gradient_norm)
      *same = o;
  }
  orbits = std::move(kept);
}

void sort_by_e(std::vector<FrozenOrbit>& orbits) {
  std::stable_sort(orbits.begin(), orbits.end(), [](const FrozenOrbit& a, const FrozenOrbit& b) {
    return a.e != b.e ? a.e < b.e : a.omega < b.omega;
  });
}

double scale_of(const PhaseMapSpec& spec, const ReducedHamiltonian& k) {
  PhaseMapSpec coarse = spec;
  coarse.resolution = 64;
  return phase_map(coarse, k).k_scale();
}

}  // namespace

GridChart parse_grid_chart(const std::string& text) {
  if (text == "cartesian") return GridChart::cartesian;
  if (text == "polar") return GridChart::polar;
  throw DomainError("unknown grid chart '" + text + "' (expected cartesian or polar)");
}

std::string to_string(GridChart chart) { return chart == GridChart::polar ? "polar" : "cartesian"; }

std::string to_string(Stability s) {
  switch (s) {
    case Stability::center: return "center";
    case Stability::saddle: return "saddle";
    default: return "degenerate";
  }
}

double impact_eccentricity(double a, double radius) {
  if (!(radius > 0.0) || !(a >= radius)) throw DomainError("impact_eccentricity requires a >= R > 0");
  return 1.0 - radius / a;
}

double PhaseMapSpec::sigma() const { return std::cos(inclination_circular); }

double PhaseMapSpec::feasible_limit() const {
  const double c = sigma();
  return std::sqrt((1.0 - c) * (1.0 + c)) * (1.0 - 1e-9);
}

double default_e_max(const PhaseMapSpec& spec) {
  const double e_impact = impact_eccentricity(spec.a, spec.model.field->reference_radius());
  return std::min(std::clamp(2.0 * e_impact, 0.05, 0.9), spec.feasible_limit());
}

double PhaseMapSpec::resolved_e_max() const {
  return e_max > 0.0 ? std::min(e_max, feasible_limit()) : default_e_max(*this);
}

void PhaseMapSpec::validate() const {
  model.validate();
  if (!(a > model.field->reference_radius()))
    throw DomainError("semi-major axis must exceed the reference radius");
  if (resolution < 16) throw DomainError("grid resolution must be at least 16");
  if (!(inclination_circular >= 0.0 && inclination_circular <= std::numbers::pi))
    throw DomainError("inclination must lie in [0, 180] deg");
  if (!(feasible_limit() > 0.0)) throw DomainError("equatorial circular inclination leaves no feasible eccentricity");
  if (!(e_max < 1.0)) throw DomainError("e_max must be below 1");
}

ReducedHamiltonian::ReducedHamiltonian(const PhaseMapSpec& spec)
    : ReducedHamiltonian(spec, std::make_shared<const MeanHamiltonian>(spec.model)) {}

ReducedHamiltonian::ReducedHamiltonian(const PhaseMapSpec& spec, std::shared_ptr<const MeanHamiltonian> model)
    : model_(std::move(model)) {
  spec.validate();
  if (!model_) throw DomainError("ReducedHamiltonian requires a model");
  a_ = spec.a;
  sigma_ = spec.sigma();
  limit_ = spec.feasible_limit();
  kepler_ = -model_->field().mu() / (2.0 * a_);
}

double ReducedHamiltonian::perturbation_at(double x, double y) const {
  const double e = std::hypot(x, y);
  if (!(e < limit_)) return nan_value;
  const double eta = std::sqrt((1.0 - e) * (1.0 + e));
  const double c = std::clamp(sigma_ / eta, -1.0, 1.0);
  const double s = std::sqrt((1.0 - c) * (1.0 + c));
  const double omega = e == 0.0 ? 0.0 : std::atan2(y, x);
  return model_->perturbation(OrbitGeometry::from_sin_cos(a_, e, s, c), omega);
}

std::optional<double> ReducedHamiltonian::at_vector(double x, double y) const {
  const double p = perturbation_at(x, y);
  if (!std::isfinite(p)) return std::nullopt;
  return kepler_ + p;
}

std::optional<double> ReducedHamiltonian::operator()(double e, double omega) const {
  if (e < 0.0) throw DomainError("eccentricity must be non-negative");
  return at_vector(e * std::cos(omega), e * std::sin(omega));
}

std::array<double, 2> ReducedHamiltonian::gradient(double x, double y) const {
  const double e = std::hypot(x, y);
  if (!(e < limit_)) return {nan_value, nan_value};
  const double eta = std::sqrt((1.0 - e) * (1.0 + e));
  const double c = std::clamp(sigma_ / eta, -1.0, 1.0);
  const double s = std::sqrt((1.0 - c) * (1.0 + c));
  const double omega = e == 0.0 ? 0.0 : std::atan2(y, x);
  const SeriesPartials p = model_->perturbation_partials(OrbitGeometry::from_sin_cos(a_, e, s, c), omega);
  // cos I = sigma/eta, so ds/de = -c (sigma e / eta^3) / s.
  const double ds_de = s > 0.0 ? -c * sigma_ * e / (eta * eta * eta * s) : 0.0;
  const double k_e = p.d_e + p.d_s * ds_de;
  const double cw = std::cos(omega), sw = std::sin(omega);
  return {cw * k_e - sw * p.d_omega_over_e, sw * k_e + cw * p.d_omega_over_e};
}

std::array<double, 2> ReducedHamiltonian::gradient_fd(double x, double y, double step) const {
  auto d = [&](double hx, double hy) {
    const double h = hx + hy;
    return (perturbation_at(x + hx, y + hy) - perturbation_at(x - hx, y - hy)) / (2.0 * h);
  };
  const double dx1 = d(step, 0), dx2 = d(0.5 * step, 0);
  const double dy1 = d(0, step), dy2 = d(0, 0.5 * step);
  return {(4.0 * dx2 - dx1) / 3.0, (4.0 * dy2 - dy1) / 3.0};
}

std::array<double, 3> ReducedHamiltonian::hessian(double x, double y, double step) const {
  const auto gxp = gradient(x + step, y), gxm = gradient(x - step, y);
  const auto gyp = gradient(x, y + step), gym = gradient(x, y - step);
  const double kxx = (gxp[0] - gxm[0]) / (2 * step);
  const double kyy = (gyp[1] - gym[1]) / (2 * step);
  const double kxy = 0.5 * ((gxp[1] - gxm[1]) + (gyp[0] - gym[0])) / (2 * step);
  return {kxx, kxy, kyy};
}

double PhaseMap::k_scale() const {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i]) continue;
    lo = std::min(lo, std::abs(values[i]));
    hi = std::max(hi, std::abs(values[i]));
  }
  return hi >= lo ? hi - lo : 0.0;
}

std::array<double, 2> PhaseMap::eccentricity_vector(int i0, int i1) const {
  if (chart == GridChart::polar) return {axis0[static_cast<std::size_t>(i0)], axis1[static_cast<std::size_t>(i1)]};
  const double x = axis0[static_cast<std::size_t>(i0)], y = axis1[static_cast<std::size_t>(i1)];
  const double e = std::hypot(x, y);
  return {e, e == 0.0 ? 0.0 : std::atan2(y, x)};
}

PhaseMap phase_map(const PhaseMapSpec& spec) { return phase_map(spec, ReducedHamiltonian(spec)); }

PhaseMap phase_map(const PhaseMapSpec& spec, const ReducedHamiltonian& k) {
  spec.validate();
  PhaseMap m;
  m.chart = spec.chart;
  m.resolution = spec.resolution;
  m.e_max = spec.resolved_e_max();
  m.e_impact = impact_eccentricity(spec.a, spec.model.field->reference_radius());
  m.feasible_limit = spec.feasible_limit();
  m.a = spec.a;
  m.inclination_circular = spec.inclination_circular;
  m.n_max = spec.model.n_max;
  m.disabled_degrees = spec.model.disabled_degrees;
  m.include_j2sq = spec.model.include_j2sq;
  m.include_centering = spec.model.include_centering;

  const int n = spec.resolution;
  m.axis0.resize(static_cast<std::size_t>(n));
  m.axis1.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (spec.chart == GridChart::polar) {
      m.axis0[static_cast<std::size_t>(i)] = m.e_max * i / (n - 1);
      m.axis1[static_cast<std::size_t>(i)] = -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
    } else {
      m.axis0[static_cast<std::size_t>(i)] = m.e_max * (2.0 * i / (n - 1) - 1.0);
      m.axis1[static_cast<std::size_t>(i)] = m.axis0[static_cast<std::size_t>(i)];
    }
  }
  m.values.assign(static_cast<std::size_t>(n) * n, nan_value);
  m.mask.assign(static_cast<std::size_t>(n) * n, 1);

  parallel_rows(n, spec.threads, [&](int i1) {
    for (int i0 = 0; i0 < n; ++i0) {
      const auto ev = m.eccentricity_vector(i0, i1);
      const auto v = k.at_vector(ev[0] * std::cos(ev[1]), ev[0] * std::sin(ev[1]));
      const std::size_t idx = static_cast<std::size_t>(i1) * n + i0;
      if (v) {
        m.values[idx] = *v;
        m.mask[idx] = 0;
      }
    }
  });

  bool any = false;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i0 = 0; i0 < n; ++i0) {
      if (m.masked(i0, i1)) continue;
      const double v = m.value(i0, i1);
      const auto ev = m.eccentricity_vector(i0, i1);
      if (!any || v < m.minimum.value) m.minimum = {v, ev[0], ev[1]};
      if (!any || v > m.maximum.value) m.maximum = {v, ev[0], ev[1]};
      any = true;
    }
  return m;
}

std::vector<FrozenOrbit> frozen_on_axis(const ReducedHamiltonian& k, double axis, double k_scale,
                                        const FrozenSearchOptions& options) {
  if (options.scan_points < 2) throw DomainError("scan needs at least two points");
  const double sign = axis >= 0 ? 1.0 : -1.0;
  const double e_impact = impact_eccentricity(k.a(), k.model().field().reference_radius());
  const double e_lim = std::min(k.feasible_limit() * (1.0 - 1e-6), options.e_cap > 0.0 ? options.e_cap : 0.95);
  auto slope = [&](double e) { return sign * k.gradient(0.0, sign * e)[1]; };

  std::vector<FrozenOrbit> out;
  const int n = options.scan_points;
  double e_prev = 0.0, d_prev = slope(0.0);
  for (int i = 1; i < n; ++i) {
    const double e = e_lim * i / (n - 1);
    const double d = slope(e);
    if (std::isfinite(d_prev) && std::isfinite(d) && (d_prev < 0) != (d < 0)) {
      double lo = e_prev, hi = e, dlo = d_prev;
      while (hi - lo > options.e_tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double dm = slope(mid);
        if (dm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((dm < 0) == (dlo < 0)) {
          lo = mid;
          dlo = dm;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      for (int polish = 0; polish < 3; ++polish) {
        const double curv = sign * k.hessian(0.0, sign * root)[2] * sign;
        const double step = curv != 0.0 ? slope(root) / curv : 0.0;
        if (!std::isfinite(step) || std::abs(step) > hi - lo + options.e_tolerance) break;
        root -= step;
      }
      if (root > root_floor) {
        FrozenOrbit o = describe(k, 0.0, sign * root, e_impact);
        o.omega = sign * std::numbers::pi / 2;
        if (options.residual_tolerance <= 0.0 || o.gradient_norm < options.residual_tolerance * k_scale)
          out.push_back(o);
      }
    }
    e_prev = e;
    d_prev = d;
  }
  return out;
}

std::vector<FrozenOrbit> frozen_on_axis(const PhaseMapSpec& spec, double axis, const FrozenSearchOptions& options) {
  const ReducedHamiltonian k(spec);
  FrozenSearchOptions o = options;
  if (o.e_cap <= 0.0) o.e_cap = spec.resolved_e_max();
  return frozen_on_axis(k, axis, scale_of(spec, k), o);
}

std::vector<std::array<double, 2>> seed_grid(double e_max, int n) {
  std::vector<std::array<double, 2>> seeds;
  if (n < 1) return seeds;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = e_max * (2.0 * (i + 0.5) / n - 1.0);
      const double y = e_max * (2.0 * (j + 0.5) / n - 1.0);
      if (std::hypot(x, y) < e_max) seeds.push_back({x, y});
    }
  seeds.push_back({0.0, 0.0});
  return seeds;
}

Frozen2dResult frozen_2d(const ReducedHamiltonian& k, const std::vector<std::array<double, 2>>& seeds, double k_scale,
                         double residual_tolerance) {
  Frozen2dResult result;
  const double e_impact = impact_eccentricity(k.a(), k.model().field().reference_radius());
  const double bound = k.feasible_limit() * (1.0 - 1e-6);
  const double target = residual_tolerance * k_scale;
  double radius = 0.0;
  for (const auto& s : seeds) radius = std::max(radius, std::hypot(s[0], s[1]));
  const double max_step = 0.05 * std::max(radius, 0.01);

  for (const auto& seed : seeds) {
    double x = seed[0], y = seed[1];
    auto g = k.gradient(x, y);
    double gn = std::hypot(g[0], g[1]);
    bool converged = std::isfinite(gn) && gn < target;
    for (int iter = 0; iter < 100 && !converged && std::isfinite(gn); ++iter) {
      const auto h = k.hessian(x, y);
      const double det = h[0] * h[2] - h[1] * h[1];
      double dx, dy;
      if (std::isfinite(det) && det != 0.0) {
        dx = -(h[2] * g[0] - h[1] * g[1]) / det;
        dy = -(-h[1] * g[0] + h[0] * g[1]) / det;
      } else {
        break;
      }
      const double len = std::hypot(dx, dy);
      if (len > max_step) {
        dx *= max_step / len;
        dy *= max_step / len;
      }
      double lambda = 1.0;
      bool moved = false;
      for (int halve = 0; halve < 30; ++halve, lambda *= 0.5) {
        const double xn = x + lambda * dx, yn = y + lambda * dy;
        if (!(std::hypot(xn, yn) < bound)) continue;
        const auto gnew = k.gradient(xn, yn);
        const double gnn = std::hypot(gnew[0], gnew[1]);
        if (std::isfinite(gnn) && gnn < gn) {
          x = xn;
          y = yn;
          g = gnew;
          gn = gnn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
      converged = gn < target;
    }
    if (converged && std::hypot(x, y) <= radius * (1.0 + 1e-9) + 1e-12)
      result.orbits.push_back(describe(k, x, y, e_impact));
    else
      ++result.failed_seeds;
  }
  deduplicate(result.orbits);
  sort_by_e(result.orbits);
  return result;
}

Frozen2dResult frozen_2d(const PhaseMapSpec& spec, int seeds_per_axis) {
  const ReducedHamiltonian k(spec);
  return frozen_2d(k, seed_grid(spec.resolved_e_max(), seeds_per_axis), scale_of(spec, k));
}

std::vector<FrozenOrbit> find_frozen(const ReducedHamiltonian& k, double e_max, double k_scale, int seeds_per_axis) {
  std::vector<FrozenOrbit> all;
  FrozenSearchOptions options;
  options.e_cap = e_max;
  for (double axis : {-std::numbers::pi / 2, std::numbers::pi / 2})
    for (const FrozenOrbit& o : frozen_on_axis(k, axis, k_scale, options)) all.push_back(o);
  for (const FrozenOrbit& o : frozen_2d(k, seed_grid(e_max, seeds_per_axis), k_scale).orbits) all.push_back(o);
  deduplicate(all);
  sort_by_e(all);
  return all;
}

std::vector<FrozenOrbit> find_frozen(const PhaseMapSpec& spec, int seeds_per_axis) {
  spec.validate();
  const ReducedHamiltonian k(spec);
  return find_frozen(k, spec.resolved_e_max(), scale_of(spec, k), seeds_per_axis);
}

std::vector<RampFrame> ramp_models(const PhaseMapSpec& base, std::vector<int> degrees,
                                   const std::function<void(const RampFrame&)>& on_frame) {
  if (degrees.empty()) throw DomainError("ramp needs at least one degree");
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  const auto& field = base.model.field;
  if (!field) throw DomainError("ramp needs a field");
  if (degrees.front() < 2 || degrees.back() > field->n_max())
    throw DomainError("ramp degrees must lie in 2.." + std::to_string(field->n_max()));

  const GravityField masked = field->with_degrees_disabled(base.model.disabled_degrees);
  AveragedSeries series;
  std::vector<RampFrame> frames;
  for (int d : degrees) {
    series.extend(masked, d);
    PhaseMapSpec spec = base;
    spec.model.n_max = d;
    std::erase_if(spec.model.disabled_degrees, [d](int x) { return x > d; });
    if (base.e_max <= 0.0) spec.e_max = base.resolved_e_max();
    auto model = std::make_shared<const MeanHamiltonian>(spec.model, std::make_shared<const AveragedSeries>(series));
    const ReducedHamiltonian k(spec, model);
    RampFrame frame;
    frame.degree = d;
    frame.map = phase_map(spec, k);
    const double scale = frame.map.k_scale();
    FrozenSearchOptions options;
    options.e_cap = frame.map.e_max;
    for (double axis : {-std::numbers::pi / 2, std::numbers::pi / 2})
      for (const FrozenOrbit& o : frozen_on_axis(k, axis, scale, options)) frame.map.frozen.push_back(o);
    sort_by_e(frame.map.frozen);
    if (on_frame) on_frame(frame);
    frames.push_back(std::move(frame));
  }
  return frames;
}

}  // namespace zonal
