#pragma once

#include <cstddef>
#include <vector>

#include "zonal/gravity_field.hpp"

namespace zonal {

/// Floor division (rounds toward minus infinity, unlike the builtin operator).
constexpr int floor_div(int a, int b) noexcept {
  const int q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

/// Parity bookkeeping of degree i relative to an index m.
struct IndexSet {
  int i_star = 0;    ///< i mod 2
  double i_pi = 0;   ///< (pi/2) i_star
  int i_m = 0;       ///< floor((i - m)/2)
  int i_m_star = 0;  ///< i_m + i_star
};

IndexSet index_set(int i, int m);

/// Keplerian ellipse plus orientation; derived quantities are cached.
class OrbitGeometry {
 public:
  OrbitGeometry(double a, double e, double inclination);

  /// Builds the geometry from sin I and cos I, avoiding a trig round trip.
  static OrbitGeometry from_sin_cos(double a, double e, double s, double c);

  double a() const noexcept { return a_; }
  double e() const noexcept { return e_; }
  double inclination() const noexcept { return inc_; }
  double eta() const noexcept { return eta_; }
  double p() const noexcept { return p_; }
  double s() const noexcept { return s_; }
  double c() const noexcept { return c_; }

  /// Orbit radius at true anomaly f.
  double radius(double f) const noexcept;

 private:
  OrbitGeometry() = default;
  void derive();

  double a_ = 0, e_ = 0, inc_ = 0, eta_ = 1, p_ = 0, s_ = 0, c_ = 1;
};

/// Zonal inclination function F_{i,j}(s) via a stable three-term recurrence in degree.
double inclination_function(int i, int j, double s);

/// F_{i,j}(s) by the explicit finite sum over l. Cancels badly at high degree.
double inclination_function_direct(int i, int j, double s);

/// All F_{i,j}(s) for 0 <= i <= n_max, 0 <= j <= i.
class InclinationTable {
 public:
  InclinationTable(int n_max, double s, bool with_derivative = false);

  double operator()(int i, int j) const noexcept { return values_[offset(i) + static_cast<std::size_t>(j)]; }
  /// dF_{i,j}/ds; only filled when built with_derivative.
  double derivative(int i, int j) const noexcept { return derivs_[offset(i) + static_cast<std::size_t>(j)]; }
  int n_max() const noexcept { return n_max_; }

 private:
  static std::size_t offset(int i) noexcept { return static_cast<std::size_t>(i) * (i + 1) / 2; }

  int n_max_;
  std::vector<double> values_;
  std::vector<double> derivs_;
};

/// Zonal eccentricity function G_{i,j}(e), closed form including eta^-(2i-1).
double eccentricity_function(int i, int j, double e);

/// V_i(f) such that U = -mu/r - (mu/a)(a^2 eta/r^2) sum_i V_i.
double osculating_vi(const GravityField& field, int i, const OrbitGeometry& g, double omega, double f);
/// Same, reusing a table built for sin I with n_max >= i.
double osculating_vi(const GravityField& field, int i, const OrbitGeometry& g, double omega, double f,
                     const InclinationTable& F);

/// <V_i>_f, the f-free part of V_i.
double averaged_vi(const GravityField& field, int i, const OrbitGeometry& g, double omega);

struct PowerReductionTerm {
  int multiplier = 0;
  double weight = 0.0;

  friend bool operator==(const PowerReductionTerm&, const PowerReductionTerm&) = default;
};

/// cos^k f * cos(m f) = sum weight * cos(multiplier f); the same weights
/// expand cos^k f * sin(m f) into sines. Sorted by multiplier, duplicates merged.
std::vector<PowerReductionTerm> cos_power_reduction(int k, int m);

enum class Provenance { kaula, brute_force };

/// One long-period term (2 - delta) C_{i,0} F_{i,k} G_{i,k} cos(multiplier*w + phase), k = kaula_index.
struct AveragedTerm {
  int degree = 0;
  int j = 0;
  int kaula_index = 0;
  int multiplier = 0;
  double phase = 0.0;
  double weight = 0.0;
  std::size_t ecc_begin = 0;
  std::size_t ecc_end = 0;
};

/// Coefficient of e^power in the polynomial part of G.
struct EccentricityMonomial {
  int power = 0;
  double coefficient = 0.0;
};

/// Value and first partials of the series at fixed a.
struct SeriesPartials {
  double value = 0;
  double d_e = 0;             ///< at fixed s
  double d_s = 0;             ///< at fixed e
  double d_omega = 0;
  double d_omega_over_e = 0;  ///< (1/e) d/dw, finite at e = 0
};

/**
 * The long-period series sum_{i=2}^{n_max} <V_i>_f as a flat term list.
 *
 * Construction stores only rational prefactors of G and the scale factors;
 * F, powers of e and eta, and the trig factors are evaluated at call time.
 * Degrees whose coefficient is zero keep their rows with zero weight.
 */
class AveragedSeries {
 public:
  AveragedSeries() = default;

  const std::vector<AveragedTerm>& terms() const noexcept { return terms_; }
  const std::vector<EccentricityMonomial>& eccentricity_monomials() const noexcept { return ecc_; }
  std::size_t size() const noexcept { return terms_.size(); }
  int n_max() const noexcept { return n_max_; }
  double reference_radius() const noexcept { return radius_; }
  Provenance provenance() const noexcept { return Provenance::kaula; }

  /// Appends degrees n_max()+1 .. n_max of the field; lower degrees are untouched.
  void extend(const GravityField& field, int n_max);

  /// Sum over all degrees of <V_i>_f.
  double evaluate(const OrbitGeometry& g, double omega) const;

  /// Contribution of each degree; index i holds <V_i>_f (entries 0 and 1 are zero).
  std::vector<double> evaluate_by_degree(const OrbitGeometry& g, double omega) const;

  SeriesPartials evaluate_partials(const OrbitGeometry& g, double omega) const;

  /// Appends the terms of a single degree; exposed for construction benchmarks.
  void append_degree(const GravityField& field, int i);

 private:
  template <typename Sink>
  void accumulate(const OrbitGeometry& g, double omega, Sink&& sink) const;

  std::vector<AveragedTerm> terms_;
  std::vector<EccentricityMonomial> ecc_;
  int n_max_ = 1;
  double radius_ = 0.0;
};

AveragedSeries build_mean_series(const GravityField& field, int n_max);

/// Number of long-period terms for degrees 2..n: sum of floor((i-2)/2) + 1.
std::size_t mean_series_term_count(int n_max) noexcept;

}  // namespace zonal
