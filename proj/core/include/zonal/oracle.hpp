#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "zonal/anomaly.hpp"
#include "zonal/gravity_field.hpp"
#include "zonal/hamiltonian.hpp"
#include "zonal/kaula.hpp"

namespace zonal {

/// Geocentric spherical coordinates of a point (km, rad).
struct SphericalPoint {
  double r = 0;
  double latitude = 0;
  double longitude = 0;
};

/// Legendre polynomial P_n(x) by the three-term recurrence.
double legendre_p(int n, double x);

/// Spherical-harmonic potential -(mu/r) sum (R/r)^n [...] including the central term.
/// Tesseral records are included when zonal_only is false.
double direct_potential(const GravityField& field, const SphericalPoint& p, bool zonal_only = true,
                        double radius_floor = 0.0);

/// Position rotated from the orbital frame; node is the right ascension of the ascending node.
std::array<double, 3> keplerian_to_cartesian(const OrbitGeometry& g, double node, double omega, double f);
SphericalPoint keplerian_to_spherical(const OrbitGeometry& g, double node, double omega, double f);

/// Orbital-element form of the zonal potential, -mu/r - (mu/a)(a^2 eta/r^2) sum V_i.
double element_potential(const GravityField& field, const OrbitGeometry& g, double omega, double f);

enum class QuadratureRule { trapezoid, gauss_legendre };

/// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre_rule(int order);

/// (1/2pi) integral over f of integrand(f) * r^2/(a^2 eta), i.e. the mean over the mean anomaly.
double average_over_mean_anomaly(const std::function<double(double)>& integrand, const OrbitGeometry& g,
                                 int max_f_degree, QuadratureRule rule = QuadratureRule::trapezoid);

/// Plain (1/2pi) integral over f, the f-free Fourier coefficient.
double average_over_true_anomaly(const std::function<double(double)>& integrand, int max_f_degree,
                                 QuadratureRule rule = QuadratureRule::trapezoid);

struct BracketStep {
  double angle = 1e-6;            ///< rad
  double action_relative = 1e-6;  ///< fraction of L
};

struct BracketResult {
  double value = 0;
  double magnitude = 0;  ///< sum of |products|, a scale for cancellation
  bool accuracy_warning = false;
};

using DelaunayFunction = std::function<double(const DelaunayState&)>;

/// {F, G} = sum over (l,L), (g,G), (h,H) of F_q G_p - F_p G_q, central differences
/// with one Richardson level.
BracketResult finite_difference_poisson_bracket(const DelaunayFunction& F, const DelaunayFunction& G,
                                                const DelaunayState& x, const BracketStep& step = {});

/// Partial derivative of F along one Delaunay coordinate (0..5 = l, g, h, L, G, H).
double finite_difference_partial(const DelaunayFunction& F, const DelaunayState& x, int coordinate,
                                 const BracketStep& step = {});

/// Coefficient of cos[(i-2j)theta - i_pi] in P_i(s sin theta), by discrete projection.
double fourier_fit_inclination(int i, int j, double s);

/// Oracle tolerances in one place.
struct Tolerances {
  double potential_identity = 1e-12;
  double averaging_identity = 1e-11;
  double dual_provenance = 1e-12;
  double expansion_identity = 1e-12;
  double fourier_identity = 1e-12;
  double second_order_bracket = 1e-6;
  double w1_zero_mean = 1e-10;
  double second_order_consistency = 1e-8;
  double quadrature_doubling = 1e-13;
  double kepler_residual = 1e-13;
  double bracket_self_test = 1e-8;
};

const Tolerances& default_tolerances();

}  // namespace zonal
