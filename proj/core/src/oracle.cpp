#include "zonal/oracle.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "zonal/errors.hpp"

namespace zonal {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::vector<std::pair<double, double>> compute_gauss_legendre(int n) {
  std::vector<std::pair<double, double>> rule(static_cast<std::size_t>(n));
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[static_cast<std::size_t>(k)] = {-x, w};
    rule[static_cast<std::size_t>(n - 1 - k)] = {x, w};
  }
  if (n == 1) rule[0] = {0.0, 2.0};
  return rule;
}

double integrate_period(const std::function<double(double)>& h, int max_f_degree, QuadratureRule rule) {
  if (max_f_degree < 0) throw DomainError("max_f_degree must be non-negative");
  double sum = 0.0;
  if (rule == QuadratureRule::trapezoid) {
    const int n = 4 * max_f_degree + 8;
    for (int k = 0; k < n; ++k) sum += h(two_pi * k / n);
    sum /= n;
  } else {
    const auto& nodes = gauss_legendre_rule(2 * max_f_degree + 32);
    for (const auto& [x, w] : nodes) sum += w * h(std::numbers::pi * (x + 1.0));
    sum *= 0.5;
  }
  if (!std::isfinite(sum)) throw Error("non-finite integrand sample in quadrature");
  return sum;
}

DelaunayState shifted(const DelaunayState& x, int coordinate, double delta) {
  DelaunayState y = x;
  switch (coordinate) {
    case 0: y.ell += delta; break;
    case 1: y.g += delta; break;
    case 2: y.h += delta; break;
    case 3: y.L += delta; break;
    case 4: y.G += delta; break;
    case 5: y.H += delta; break;
    default: throw DomainError("Delaunay coordinate index out of range");
  }
  return y;
}

double step_for(const DelaunayState& x, int coordinate, const BracketStep& step) {
  return coordinate < 3 ? step.angle : step.action_relative * x.L;
}

}  // namespace

double legendre_p(int n, double x) {
  if (n < 0) throw DomainError("legendre_p: negative degree");
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double direct_potential(const GravityField& field, const SphericalPoint& p, bool zonal_only, double radius_floor) {
  if (!(p.r > 0.0) || p.r < radius_floor) throw DomainError("direct_potential: radius below floor");
  const double x = std::sin(p.latitude);
  const double rho = field.reference_radius() / p.r;
  double sum = 1.0;
  double rn = 1.0;
  double p0 = 1.0, p1 = x;
  for (int n = 1; n <= field.n_max(); ++n) {
    rn *= rho;
    if (n >= 2) {
      const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    sum += rn * field.zonal(n) * p1;
  }
  if (!zonal_only && !field.tesserals().empty()) {
    const int n_max = field.n_max();
    const double u = std::cos(p.latitude);
    // Fully normalized associated functions, column by column in m.
    std::vector<double> pbar(static_cast<std::size_t>((n_max + 1) * (n_max + 2) / 2), 0.0);
    auto idx = [](int n, int m) { return static_cast<std::size_t>(n * (n + 1) / 2 + m); };
    pbar[idx(0, 0)] = 1.0;
    for (int m = 0; m <= n_max; ++m) {
      if (m > 0) {
        const double k = m == 1 ? std::sqrt(3.0) : std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        pbar[idx(m, m)] = k * u * pbar[idx(m - 1, m - 1)];
      }
      if (m + 1 <= n_max) pbar[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pbar[idx(m, m)];
      for (int n = m + 2; n <= n_max; ++n) {
        const double a = std::sqrt((2.0 * n - 1.0) * (2.0 * n + 1.0) / ((n - m) * static_cast<double>(n + m)));
        const double b = std::sqrt((2.0 * n + 1.0) * (n + m - 1.0) * (n - m - 1.0) /
                                   ((n - m) * static_cast<double>(n + m) * (2.0 * n - 3.0)));
        pbar[idx(n, m)] = a * x * pbar[idx(n - 1, m)] - b * pbar[idx(n - 2, m)];
      }
    }
    for (const CoefficientRecord& rec : field.tesserals()) {
      const CoefficientRecord nrec = normalize(rec);
      const double term = std::pow(rho, nrec.degree) * pbar[idx(nrec.degree, nrec.order)] *
                          (nrec.c * std::cos(nrec.order * p.longitude) + nrec.s * std::sin(nrec.order * p.longitude));
      sum += term;
    }
  }
  return -field.mu() / p.r * sum;
}

std::array<double, 3> keplerian_to_cartesian(const OrbitGeometry& g, double node, double omega, double f) {
  const double r = g.radius(f);
  const double theta = f + omega;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double cn = std::cos(node), sn = std::sin(node);
  return {r * (cn * ct - sn * st * g.c()), r * (sn * ct + cn * st * g.c()), r * st * g.s()};
}

SphericalPoint keplerian_to_spherical(const OrbitGeometry& g, double node, double omega, double f) {
  const auto x = keplerian_to_cartesian(g, node, omega, f);
  const double rxy = std::hypot(x[0], x[1]);
  return SphericalPoint{std::hypot(rxy, x[2]), std::atan2(x[2], rxy), std::atan2(x[1], x[0])};
}

double element_potential(const GravityField& field, const OrbitGeometry& g, double omega, double f) {
  const double r = g.radius(f);
  double sum = 0.0;
  for (int i = 2; i <= field.n_max(); ++i) sum += osculating_vi(field, i, g, omega, f);
  return -field.mu() / r - field.mu() / g.a() * parallax_factor(g, f) * sum;
}

const std::vector<std::pair<double, double>>& gauss_legendre_rule(int order) {
  if (order < 1) throw DomainError("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::vector<std::pair<double, double>>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double average_over_mean_anomaly(const std::function<double(double)>& integrand, const OrbitGeometry& g,
                                 int max_f_degree, QuadratureRule rule) {
  return integrate_period([&](double f) { return integrand(f) / parallax_factor(g, f); }, max_f_degree, rule);
}

double average_over_true_anomaly(const std::function<double(double)>& integrand, int max_f_degree,
                                 QuadratureRule rule) {
  return integrate_period(integrand, max_f_degree, rule);
}

double finite_difference_partial(const DelaunayFunction& F, const DelaunayState& x, int coordinate,
                                 const BracketStep& step) {
  const double h = step_for(x, coordinate, step);
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("finite-difference step underflow");
  auto central = [&](double hh) {
    return (F(shifted(x, coordinate, hh)) - F(shifted(x, coordinate, -hh))) / (2.0 * hh);
  };
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

BracketResult finite_difference_poisson_bracket(const DelaunayFunction& F, const DelaunayFunction& G,
                                                const DelaunayState& x, const BracketStep& step) {
  BracketResult out;
  for (int k = 0; k < 3; ++k) {
    const double fq = finite_difference_partial(F, x, k, step);
    const double fp = finite_difference_partial(F, x, k + 3, step);
    const double gq = finite_difference_partial(G, x, k, step);
    const double gp = finite_difference_partial(G, x, k + 3, step);
    out.value += fq * gp - fp * gq;
    out.magnitude += std::abs(fq * gp) + std::abs(fp * gq);
  }
  out.accuracy_warning = !std::isfinite(out.value) || (out.magnitude > 0.0 && std::abs(out.value) < 1e-8 * out.magnitude);
  return out;
}

double fourier_fit_inclination(int i, int j, double s) {
  if (i < 0 || i > 60 || j < 0 || j > i) throw DomainError("fourier_fit_inclination: need 0 <= j <= i <= 60");
  const int n = 4 * i + 64;
  const int m = i - 2 * j;
  const int am = std::abs(m);
  const bool odd = i % 2 == 1;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double theta = two_pi * k / n;
    const double v = legendre_p(i, s * std::sin(theta));
    acc += v * (odd ? std::sin(am * theta) : std::cos(am * theta));
  }
  acc /= n;
  if (am == 0) return acc;
  // F cos(m theta) and F cos(-m theta) share one Fourier line; sin(-x) = -sin x.
  return (odd && m < 0) ? -acc : acc;
}

const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace zonal
