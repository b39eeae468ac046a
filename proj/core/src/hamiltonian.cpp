#include "zonal/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zonal/anomaly.hpp"
#include "zonal/errors.hpp"

namespace zonal {

bool prefers_j2sq(const GravityField& field) {
  const double c20 = field.zonal(2);
  if (c20 == 0.0) return false;
  const double c30 = field.n_max() >= 3 ? field.zonal(3) : 0.0;
  return std::abs(c30 / (c20 * c20)) <= 10.0;
}

MeanModelSpec MeanModelSpec::defaults(std::shared_ptr<const GravityField> field, int n_max) {
  if (!field) throw DomainError("MeanModelSpec requires a field");
  MeanModelSpec spec;
  spec.n_max = n_max < 0 ? field->n_max() : n_max;
  spec.include_j2sq = prefers_j2sq(*field);
  spec.field = std::move(field);
  return spec;
}

void MeanModelSpec::validate() const {
  if (!field) throw DomainError("MeanModelSpec requires a field");
  if (n_max < 2 || n_max > field->n_max())
    throw DomainError("n_max " + std::to_string(n_max) + " outside 2.." + std::to_string(field->n_max()));
  if (include_centering && !include_j2sq) throw DomainError("include_centering requires include_j2sq");
  for (int d : disabled_degrees)
    if (d < 2 || d > n_max) throw DomainError("disabled degree " + std::to_string(d) + " outside 2..n_max");
}

DelaunayState DelaunayState::from_elements(double mu, double a, double e, double inclination, double ell,
                                           double omega, double node) {
  const OrbitGeometry g(a, e, inclination);
  DelaunayState x;
  x.ell = ell;
  x.g = omega;
  x.h = node;
  x.L = std::sqrt(mu * a);
  x.G = x.L * g.eta();
  x.H = x.G * g.c();
  return x;
}

double DelaunayState::e() const {
  const double ratio = G / L;
  if (!(ratio > 0.0 && ratio <= 1.0)) throw DomainError("Delaunay state requires 0 < G <= L");
  return std::sqrt((1.0 - ratio) * (1.0 + ratio));
}

OrbitGeometry DelaunayState::geometry(double mu) const {
  const double c = cos_inclination();
  if (!(std::abs(c) <= 1.0)) throw DomainError("Delaunay state requires |H| <= G");
  return OrbitGeometry::from_sin_cos(a(mu), e(), std::sqrt((1.0 - c) * (1.0 + c)), c);
}

double q_coeff(int j, int l, const OrbitGeometry& g) {
  if (j < 0 || j > 6 || l < -2 || l > 2) return 0.0;
  const double e = g.e(), e2 = e * e;
  const double s2 = g.s() * g.s(), s4 = s2 * s2;
  if (j == 0 && l == -1) l = 1;
  switch (j * 10 + l) {
    case 0: return 3.0 / 64 * e2 * (5 * s4 + 8 * s2 - 8) - (21 * s4 - 42 * s2 + 20) / 16.0;
    case 1: return 3.0 / 64 * e2 * s2 * (14 - 15 * s2);
    case 10: return -1.0 / 32 * e * (27 * s4 - 108 * s2 + 64);
    case 11: return 7.0 / 16 * e * s2 * (11 - 12 * s2);
    case 20: return 3.0 / 64 * e2 * (5 * s4 + 8 * s2 - 8);
    case 21: return 3.0 / 16 * e2 * s2 * (2 - s2) + 1.0 / 8 * (20 - 21 * s2) * s2;
    case 22: return -15.0 / 128 * e2 * s4;
    case 31: return 3.0 / 16 * e * s2 * (8 * s2 - 5);
    case 32: return -9.0 / 64 * e * s4;
    case 41: return 3.0 / 32 * e2 * s2 * (13 * s2 - 10);
    case 42: return 3.0 / 64 * (4 - e2) * s4;
    case 52: return 15.0 / 64 * e * s4;
    case 62: return 9.0 / 128 * e2 * s4;
    default: return 0.0;
  }
}

double qtilde_coeff(int j, int l, const OrbitGeometry& g) {
  if (j < 0 || j > 5 || l < -2 || l > 2) return 0.0;
  const double e = g.e(), e2 = e * e;
  const double s2 = g.s() * g.s();
  const double n = g.eta(), n2 = n * n;
  const double cp = 1 + n, cm = 1 - n;
  auto t2 = [&](int ll) {
    switch (ll) {
      case -1: return 1.0 / 8 * e * (3 * s2 - 2) * cm;
      case 1: return -3.0 / 8 * e * (3 * s2 - 2) * cp;
      default: return 0.0;
    }
  };
  switch (j) {
    case 0:
      return (l == 1 || l == -1) ? 3.0 / 16 * e * (1 + 2 * n) * (4 - 5 * s2) : 0.0;
    case 1:
      switch (l) {
        case -2: return -3.0 / 256 * e2 * s2 * cm;
        case -1: return 3.0 / 128 * ((9 - 42 * n - 31 * n2) * s2 - 2.0 / 3 * (5 - 54 * n - 39 * n2)) * cm;
        case 0: return 3.0 / 128 * (2 + 23 * n - 31 * n2) * s2 * cp - 3.0 / 16 * e2 * (1 + 2 * n);
        case 1: return 3.0 / 128 * ((37 * n2 - 14 * n - 83) * s2 + (58 + 12 * n - 30 * n2)) * cp;
        case 2: return 3.0 / 256 * (21 + 18 * n + n2) * s2 * cm;
      }
      break;
    case 2:
      switch (l) {
        case -1:
        case 1: return t2(l);
        case 0: return 3.0 / 32 * e * ((15 * s2 - 8) * n - 4);
        case 2: return 15.0 / 32 * e * (n + 2) * s2;
        default: return 0.0;
      }
    case 3:
      switch (l) {
        case -1:
        case 1: return 3.0 / 16 * e * t2(l);
        case 0: return 3.0 / 256 * (61 * n2 + 66 * n - 23) * s2 * cm - 3.0 / 16 * e2 * (1 + 2 * n);
        case 2: return 9.0 / 256 * (39 - 6 * n - 5 * n2) * s2 * cp;
        default: return 0.0;
      }
    case 4:
    case 5: {
      const double scale = j == 5 ? 5.0 / 24 * e : 1.0;
      if (l == 0) return scale * (-9.0 / 32 * e * s2 * cm);
      if (l == 2) return scale * (27.0 / 32 * e * s2 * cp);
      return 0.0;
    }
  }
  return 0.0;
}

double parallax_factor(const OrbitGeometry& g, double f) {
  const double k = 1.0 + g.e() * std::cos(f);
  return k * k / (g.eta() * g.eta() * g.eta());
}

double v2_explicit(const GravityField& field, const OrbitGeometry& g, double omega, double f) {
  const double e = g.e(), s2 = g.s() * g.s();
  const double rho = field.reference_radius() / g.a();
  const double bracket = 0.25 * (2 - 3 * s2) * (1 + e * std::cos(f)) +
                         0.375 * s2 *
                             (e * std::cos(f + 2 * omega) + 2 * std::cos(2 * f + 2 * omega) +
                              e * std::cos(3 * f + 2 * omega));
  return -rho * rho * field.zonal(2) / (g.eta() * g.eta() * g.eta()) * bracket;
}

double w1_parallax(const GravityField& field, const OrbitGeometry& g, double omega, double f) {
  const double e = g.e(), n = g.eta(), s2 = g.s() * g.s();
  const double G = std::sqrt(field.mu() * g.p());
  const double rp = field.reference_radius() / g.p();
  const double Q[4] = {e * e * (1 + 2 * n) / ((1 + n) * (1 + n)), 3 * e, 3.0, e};
  double periodic = 0.0;
  for (int i = 0; i < 4; ++i) periodic += Q[i] * std::sin(i * f + 2 * omega);
  return G * rp * rp * field.zonal(2) / 8.0 * (e * (4 - 6 * s2) * std::sin(f) + s2 * periodic);
}

double tilde_h02(const GravityField& field, const OrbitGeometry& g, double omega, double f) {
  const double e = g.e(), n = g.eta(), s2 = g.s() * g.s();
  const double fac = e * s2 / ((1 + n) * (1 + n));
  double table = 0.0;
  for (int j = 0; j <= 6; ++j) {
    for (int l = -2; l <= 2; ++l) {
      const double coef = q_coeff(j, l, g) + fac * qtilde_coeff(j, l, g);
      if (coef != 0.0) table += coef * std::cos(j * f + 2 * l * omega);
    }
  }
  const double c20 = field.zonal(2);
  const double rp = field.reference_radius() / g.p();
  double tail = 0.0;
  for (int i = 3; i <= field.n_max(); ++i) tail += osculating_vi(field, i, g, omega, f);
  return field.mu() / g.a() * parallax_factor(g, f) * (c20 * c20 * rp * rp * rp * rp * n * table - 2.0 * tail);
}

double tilde_h02(const GravityField& field, const DelaunayState& x) {
  const OrbitGeometry g = x.geometry(field.mu());
  return tilde_h02(field, g, x.g, true_from_mean(x.ell, g.e()));
}

double h02_parallax_mean(const GravityField& field, const OrbitGeometry& g, double omega, bool with_centering) {
  const double e = g.e(), n = g.eta(), s2 = g.s() * g.s();
  const double fac = with_centering ? e * s2 / ((1 + n) * (1 + n)) : 0.0;
  const double c20 = field.zonal(2);
  const double rp = field.reference_radius() / g.p();
  const double bracket = 0.5 * q_coeff(0, 0, g) + (q_coeff(0, 1, g) + fac * qtilde_coeff(0, 1, g)) * std::cos(2 * omega);
  double tail = 0.0;
  for (int i = 3; i <= field.n_max(); ++i) tail += averaged_vi(field, i, g, omega);
  return 2.0 * field.mu() / g.a() * (c20 * c20 * rp * rp * rp * rp * n * bracket - tail);
}

double h02_delaunay_secular(const GravityField& field, const OrbitGeometry& g) {
  const double n = g.eta(), s2 = g.s() * g.s();
  const double c20 = field.zonal(2);
  const double rp = field.reference_radius() / g.p();
  const double k = 2 - 3 * s2;
  return -field.mu() / (2.0 * g.a()) * c20 * c20 * rp * rp * rp * rp * 0.125 * n * (1 + 3 * n) * k * k;
}

MeanHamiltonian::MeanHamiltonian(MeanModelSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  field_ = std::make_shared<const GravityField>(
      spec_.field->truncated(spec_.n_max).with_degrees_disabled(spec_.disabled_degrees));
  series_ = std::make_shared<const AveragedSeries>(build_mean_series(*field_, spec_.n_max));
}

MeanHamiltonian::MeanHamiltonian(MeanModelSpec spec, std::shared_ptr<const AveragedSeries> series)
    : spec_(std::move(spec)) {
  spec_.validate();
  if (!series || series->n_max() != spec_.n_max) throw DomainError("series degree does not match the model spec");
  field_ = std::make_shared<const GravityField>(
      spec_.field->truncated(spec_.n_max).with_degrees_disabled(spec_.disabled_degrees));
  series_ = std::move(series);
}

double MeanHamiltonian::operator()(double a, double e, double inclination, double omega) const {
  return evaluate(OrbitGeometry(a, e, inclination), omega);
}

double MeanHamiltonian::evaluate(const OrbitGeometry& g, double omega) const {
  return -field_->mu() / (2.0 * g.a()) + perturbation(g, omega);
}

double MeanHamiltonian::perturbation(const OrbitGeometry& g, double omega) const {
  return -field_->mu() / g.a() * series_->evaluate(g, omega) + second_order(g, omega);
}

SeriesPartials MeanHamiltonian::perturbation_partials(const OrbitGeometry& g, double omega) const {
  SeriesPartials p = series_->evaluate_partials(g, omega);
  const double k = -field_->mu() / g.a();
  p.value *= k;
  p.d_e *= k;
  p.d_s *= k;
  p.d_omega *= k;
  p.d_omega_over_e *= k;
  if (!spec_.include_j2sq) return p;

  constexpr double h = 1e-7;
  const double e = g.e(), s = g.s(), c = g.c();
  const double sign_c = c < 0 ? -1.0 : 1.0;
  auto at = [&](double ee, double ss, double w) {
    const double cc = sign_c * std::sqrt((1.0 - ss) * (1.0 + ss));
    return second_order(OrbitGeometry::from_sin_cos(g.a(), ee, ss, cc), w);
  };
  p.value += second_order(g, omega);
  // The block is even in e, so the lower sample is mirrored near the origin.
  p.d_e += (at(e + h, s, omega) - at(std::abs(e - h), s, omega)) / (2 * h);
  const double s_hi = std::min(1.0, s + h), s_lo = std::max(0.0, s - h);
  p.d_s += (at(e, s_hi, omega) - at(e, s_lo, omega)) / (s_hi - s_lo);
  const double dw = (second_order(g, omega + h) - second_order(g, omega - h)) / (2 * h);
  p.d_omega += dw;
  // The omega dependence carries e^2, so dw/e vanishes at the origin.
  if (e > 0.0) p.d_omega_over_e += dw / e;
  return p;
}

double MeanHamiltonian::second_order(const OrbitGeometry& g, double omega) const {
  if (!spec_.include_j2sq) return 0.0;
  const double e = g.e(), n = g.eta(), s2 = g.s() * g.s();
  const double c20 = field_->zonal(2);
  const double rp = field_->reference_radius() / g.p();
  const double k = 2 - 3 * s2;
  const double fac = spec_.include_centering ? e * s2 / ((1 + n) * (1 + n)) : 0.0;
  const double bracket = -(1 + 3 * n) / 32.0 * k * k + 0.5 * q_coeff(0, 0, g) +
                         (q_coeff(0, 1, g) + fac * qtilde_coeff(0, 1, g)) * std::cos(2 * omega);
  return field_->mu() / g.a() * n * c20 * c20 * rp * rp * rp * rp * bracket;
}

double mean_hamiltonian(const MeanModelSpec& spec, double a, double e, double inclination, double omega) {
  return MeanHamiltonian(spec)(a, e, inclination, omega);
}

}  // namespace zonal
