#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zonal/gravity_field.hpp"
#include "zonal/kaula.hpp"

namespace zonal {

/// IEEE binary128; the brute-force expansion cancels too much for double.
using Real128 = __float128;

enum class Trig : std::uint8_t { cos = 0, sin = 1 };

/// Basis symbols of a Poisson monomial.
enum class Symbol : std::uint8_t { e = 0, s, c, eta, eta_inv, ratio };
inline constexpr std::size_t symbol_count = 6;

struct Exponents {
  std::array<std::uint16_t, symbol_count> power{};

  std::uint16_t& operator[](Symbol x) { return power[static_cast<std::size_t>(x)]; }
  std::uint16_t operator[](Symbol x) const { return power[static_cast<std::size_t>(x)]; }

  friend auto operator<=>(const Exponents&, const Exponents&) = default;
};

/// coefficient * monomial * trig(k_f f + k_omega w).
struct PoissonTerm {
  Real128 coefficient = 0;
  Exponents exponents;
  int k_f = 0;
  int k_omega = 0;
  Trig trig = Trig::cos;
};

/// Numeric values of the basis symbols and angles at which a series is evaluated.
struct PoissonPoint {
  double e = 0, s = 0, c = 1, eta = 1, ratio = 0, f = 0, omega = 0;

  static PoissonPoint at(const OrbitGeometry& g, double reference_radius, double omega, double f);
};

/**
 * Canonical multivariate trigonometric series.
 *
 * Angles are normalised to k_f > 0, or k_f = 0 with k_omega >= 0; a constant
 * sine is dropped. No two terms share (angle, selector, exponents), zero
 * coefficients are purged, and terms are sorted by (k_f, k_omega, selector,
 * exponents).
 */
class PoissonSeries {
 public:
  PoissonSeries() = default;

  static PoissonSeries constant(Real128 value);
  static PoissonSeries monomial(Real128 coefficient, const Exponents& exponents);
  static PoissonSeries trig(int k_f, int k_omega, Trig selector, Real128 coefficient = 1);
  static PoissonSeries from_terms(std::vector<PoissonTerm> terms);

  const std::vector<PoissonTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Source degree range, recorded by expand_vi; {0, 0} when unknown.
  int min_degree() const noexcept { return min_degree_; }
  int max_degree() const noexcept { return max_degree_; }
  void set_degree_range(int lo, int hi) noexcept {
    min_degree_ = lo;
    max_degree_ = hi;
  }

  Real128 evaluate_extended(const PoissonPoint& x) const;
  double evaluate(const PoissonPoint& x) const { return static_cast<double>(evaluate_extended(x)); }

  PoissonSeries scaled(Real128 factor) const;

  /// One term per line: "coeff * e^a s^b c^d eta^g etainv^h (R/a)^i * cos(k_f f + k_w w)".
  void dump(std::ostream& out) const;
  std::string dump() const;

 private:
  std::vector<PoissonTerm> terms_;
  int min_degree_ = 0;
  int max_degree_ = 0;
};

PoissonSeries canonicalize(const PoissonSeries& s);
PoissonSeries series_add(const PoissonSeries& a, const PoissonSeries& b);
PoissonSeries series_mul(const PoissonSeries& a, const PoissonSeries& b);

inline PoissonSeries operator+(const PoissonSeries& a, const PoissonSeries& b) { return series_add(a, b); }
inline PoissonSeries operator*(const PoissonSeries& a, const PoissonSeries& b) { return series_mul(a, b); }
inline PoissonSeries operator-(const PoissonSeries& a) { return a.scaled(-1); }
inline PoissonSeries operator-(const PoissonSeries& a, const PoissonSeries& b) { return series_add(a, -b); }

/// Fully linearised expansion of V_i in the basis (e, s, c, eta, 1/eta, R/a).
PoissonSeries expand_vi(const GravityField& field, int i);

/// Keeps the terms free of f (k_f = 0).
PoissonSeries brute_force_average(const PoissonSeries& s);

/// Sum of brute_force_average(expand_vi(i)) for i = 2..n_max.
PoissonSeries brute_force_mean_series(const GravityField& field, int n_max);

std::string to_string(Real128 value, int digits = 17);

}  // namespace zonal
