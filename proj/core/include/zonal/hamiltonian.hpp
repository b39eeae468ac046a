#pragma once

#include <memory>
#include <vector>

#include "zonal/gravity_field.hpp"
#include "zonal/kaula.hpp"

namespace zonal {

/// True when C_{2,0} dominates enough for the second-order J2 terms to matter (|C30/C20^2| <= 10).
bool prefers_j2sq(const GravityField& field);

/// Which degrees and second-order terms enter the mean Hamiltonian.
struct MeanModelSpec {
  std::shared_ptr<const GravityField> field;
  int n_max = 2;
  bool include_j2sq = false;
  bool include_centering = false;
  std::vector<int> disabled_degrees;

  /// n_max = field n_max unless given; include_j2sq from prefers_j2sq.
  static MeanModelSpec defaults(std::shared_ptr<const GravityField> field, int n_max = -1);

  /// Throws DomainError when inconsistent.
  void validate() const;
};

/// Delaunay canonical set; all quantities are mean elements.
struct DelaunayState {
  double ell = 0, g = 0, h = 0;
  double L = 0, G = 0, H = 0;

  static DelaunayState from_elements(double mu, double a, double e, double inclination, double ell, double omega,
                                     double node = 0.0);

  double a(double mu) const { return L * L / mu; }
  double e() const;
  double cos_inclination() const { return H / G; }
  double mean_motion(double mu) const { return mu * mu / (L * L * L); }
  OrbitGeometry geometry(double mu) const;
};

/// Non-null q_{j,l} (j = 0..6, l = 0..2; q_{0,-1} mirrors q_{0,1}). Zero elsewhere.
double q_coeff(int j, int l, const OrbitGeometry& g);

/// Non-null q~_{j,l} (j = 0..5, l = -2..2). Zero elsewhere.
double qtilde_coeff(int j, int l, const OrbitGeometry& g);

/// a^2 eta / r^2 at true anomaly f.
double parallax_factor(const OrbitGeometry& g, double f);

/// V_2 from its explicit expansion in f and omega.
double v2_explicit(const GravityField& field, const OrbitGeometry& g, double omega, double f);

/// First-order generator of the parallax elimination, including the Kozai-like constant term.
double w1_parallax(const GravityField& field, const OrbitGeometry& g, double omega, double f);

/// Second-order term produced by the parallax elimination, as a function of f.
double tilde_h02(const GravityField& field, const OrbitGeometry& g, double omega, double f);
double tilde_h02(const GravityField& field, const DelaunayState& x);

/// f-free coefficient of a^2 eta/r^2 in tilde_h02 (equal to its f-average after dividing the
/// prefactor out, and to its l-average).
double h02_parallax_mean(const GravityField& field, const OrbitGeometry& g, double omega, bool with_centering = true);

/// Closed-form secular block from the Delaunay normalization of the C_{2,0} terms.
double h02_delaunay_secular(const GravityField& field, const OrbitGeometry& g);

/**
 * Mean-elements Hamiltonian for a fixed model. Construction builds the
 * long-period series once; evaluation is pure and thread-safe.
 */
class MeanHamiltonian {
 public:
  explicit MeanHamiltonian(MeanModelSpec spec);

  /// Reuses an existing series covering the spec's degrees (used by model ramps).
  MeanHamiltonian(MeanModelSpec spec, std::shared_ptr<const AveragedSeries> series);

  double operator()(double a, double e, double inclination, double omega) const;
  double evaluate(const OrbitGeometry& g, double omega) const;

  /// H + mu/2a: the part that depends on (e, I, omega).
  double perturbation(const OrbitGeometry& g, double omega) const;

  /// Partials of perturbation(); the second-order block is differenced numerically.
  SeriesPartials perturbation_partials(const OrbitGeometry& g, double omega) const;

  /// Second-order J2 block (zero unless include_j2sq).
  double second_order(const OrbitGeometry& g, double omega) const;

  const MeanModelSpec& spec() const noexcept { return spec_; }
  const AveragedSeries& series() const noexcept { return *series_; }
  std::shared_ptr<const AveragedSeries> shared_series() const noexcept { return series_; }
  const GravityField& field() const noexcept { return *field_; }

 private:
  MeanModelSpec spec_;
  std::shared_ptr<const GravityField> field_;
  std::shared_ptr<const AveragedSeries> series_;
};

double mean_hamiltonian(const MeanModelSpec& spec, double a, double e, double inclination, double omega);

}  // namespace zonal
