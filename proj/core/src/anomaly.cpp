#include "zonal/anomaly.hpp"

#include <cmath>
#include <numbers>

#include "zonal/errors.hpp"

namespace zonal {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

void check_e(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw DomainError("eccentricity must satisfy 0 <= e < 1");
}

}  // namespace

double solve_kepler(double mean_anomaly, double e) {
  check_e(e);
  const double turns = std::floor((mean_anomaly + std::numbers::pi) / two_pi);
  const double m = mean_anomaly - turns * two_pi;  // in [-pi, pi)
  double E = e < 0.8 ? m : (m >= 0 ? std::numbers::pi : -std::numbers::pi);
  for (int iter = 0; iter < 100; ++iter) {
    const double f0 = E - e * std::sin(E) - m;
    const double f1 = 1.0 - e * std::cos(E);
    const double f2 = e * std::sin(E);
    // Halley step
    const double step = f0 / (f1 - 0.5 * f0 * f2 / f1);
    E -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(E))) break;
  }
  return E + turns * two_pi;
}

double true_from_eccentric(double eccentric_anomaly, double e) {
  check_e(e);
  const double beta = std::sqrt((1.0 + e) / (1.0 - e));
  const double turns = std::floor((eccentric_anomaly + std::numbers::pi) / two_pi);
  const double E = eccentric_anomaly - turns * two_pi;
  return 2.0 * std::atan(beta * std::tan(0.5 * E)) + turns * two_pi;
}

double eccentric_from_true(double true_anomaly, double e) {
  check_e(e);
  const double beta = std::sqrt((1.0 - e) / (1.0 + e));
  const double turns = std::floor((true_anomaly + std::numbers::pi) / two_pi);
  const double f = true_anomaly - turns * two_pi;
  return 2.0 * std::atan(beta * std::tan(0.5 * f)) + turns * two_pi;
}

double mean_from_true(double true_anomaly, double e) {
  const double E = eccentric_from_true(true_anomaly, e);
  return E - e * std::sin(E);
}

double true_from_mean(double mean_anomaly, double e) { return true_from_eccentric(solve_kepler(mean_anomaly, e), e); }

AnomalySet AnomalySet::from_mean(double mean_anomaly, double e, double omega) {
  AnomalySet a;
  a.M = mean_anomaly;
  a.E = solve_kepler(mean_anomaly, e);
  a.f = true_from_eccentric(a.E, e);
  a.theta = a.f + omega;
  a.center = a.f - a.M;
  return a;
}

AnomalySet AnomalySet::from_true(double true_anomaly, double e, double omega) {
  AnomalySet a;
  a.f = true_anomaly;
  a.E = eccentric_from_true(true_anomaly, e);
  a.M = a.E - e * std::sin(a.E);
  a.theta = a.f + omega;
  a.center = a.f - a.M;
  return a;
}

}  // namespace zonal
