#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zonal/hamiltonian.hpp"

namespace zonal {

/// Grid layout of a phase map.
enum class GridChart {
  cartesian,  ///< (e cos w, e sin w) on [-e_max, e_max]^2
  polar,      ///< e in [0, e_max], w in [-pi, pi)
};

GridChart parse_grid_chart(const std::string& text);
std::string to_string(GridChart chart);

struct PhaseMapSpec {
  double a = 0;                     ///< km
  double inclination_circular = 0;  ///< rad; sigma = cos of it
  MeanModelSpec model;
  GridChart chart = GridChart::cartesian;
  int resolution = 128;
  double e_max = 0;  ///< <= 0 selects default_e_max()
  unsigned threads = 0;  ///< 0 = hardware concurrency

  double sigma() const;
  /// sqrt(1 - sigma^2) (1 - 1e-9); eccentricities at or beyond are masked.
  double feasible_limit() const;
  /// Resolved outer radius; never beyond feasible_limit().
  double resolved_e_max() const;
  /// Throws DomainError on a <= R, resolution < 16, or an empty feasible region.
  void validate() const;
};

/// Twice the impact eccentricity, clamped to [0.05, 0.9] and to the feasible limit.
double default_e_max(const PhaseMapSpec& spec);

/// 1 - R/a. a == R gives 0; a < R throws DomainError.
double impact_eccentricity(double a, double radius);

/**
 * K(e, w) = mean Hamiltonian at fixed a and sigma = G cos I / L, with
 * cos I = sigma/eta. Derivatives are taken on the perturbation part.
 */
class ReducedHamiltonian {
 public:
  explicit ReducedHamiltonian(const PhaseMapSpec& spec);
  ReducedHamiltonian(const PhaseMapSpec& spec, std::shared_ptr<const MeanHamiltonian> model);

  /// Full value K; nullopt when e is infeasible.
  std::optional<double> operator()(double e, double omega) const;
  std::optional<double> at_vector(double x, double y) const;

  /// K + mu/2a at (x, y) = (e cos w, e sin w); NaN when infeasible.
  double perturbation_at(double x, double y) const;

  /// Analytic gradient in the Cartesian chart; NaN when infeasible.
  std::array<double, 2> gradient(double x, double y) const;
  /// Central differences with one Richardson level, the cross-check of gradient().
  std::array<double, 2> gradient_fd(double x, double y, double step = 1e-6) const;
  /// Central differences of the analytic gradient; {Kxx, Kxy, Kyy}.
  std::array<double, 3> hessian(double x, double y, double step = 1e-6) const;

  double kepler_term() const noexcept { return kepler_; }
  double sigma() const noexcept { return sigma_; }
  double feasible_limit() const noexcept { return limit_; }
  double a() const noexcept { return a_; }
  const MeanHamiltonian& model() const noexcept { return *model_; }

 private:
  std::shared_ptr<const MeanHamiltonian> model_;
  double a_ = 0, sigma_ = 0, limit_ = 0, kepler_ = 0;
};

enum class Stability { center, saddle, degenerate };

std::string to_string(Stability s);

struct FrozenOrbit {
  double e = 0;
  double omega = 0;
  Stability stability = Stability::degenerate;
  double hessian_det = 0;
  double hessian_trace = 0;
  double value = 0;          ///< K at the orbit
  double gradient_norm = 0;  ///< |grad K| in the Cartesian chart
  double omega_derivative = 0;  ///< dK/dw, on-axis check
  bool impact = false;       ///< e >= e_impact
  int n_max = 0;
};

struct Extremum {
  double value = 0;
  double e = 0;
  double omega = 0;
};

struct PhaseMap {
  GridChart chart = GridChart::cartesian;
  int resolution = 0;
  double e_max = 0;
  double e_impact = 0;
  double feasible_limit = 0;
  double a = 0;
  double inclination_circular = 0;
  int n_max = 0;
  std::vector<int> disabled_degrees;
  bool include_j2sq = false;
  bool include_centering = false;
  std::vector<double> axis0;  ///< x (cartesian) or e (polar)
  std::vector<double> axis1;  ///< y (cartesian) or w (polar)
  std::vector<double> values;  ///< row-major, values[i1 * resolution + i0]; NaN where masked
  std::vector<std::uint8_t> mask;  ///< 1 = masked
  Extremum minimum, maximum;
  std::vector<FrozenOrbit> frozen;

  double value(int i0, int i1) const { return values[static_cast<std::size_t>(i1) * resolution + i0]; }
  bool masked(int i0, int i1) const { return mask[static_cast<std::size_t>(i1) * resolution + i0] != 0; }
  /// max|K| - min|K| over unmasked cells.
  double k_scale() const;
  /// Grid coordinates to (e, w).
  std::array<double, 2> eccentricity_vector(int i0, int i1) const;
};

/// Grid of K values; masked cells hold NaN. Row order is deterministic regardless of threads.
PhaseMap phase_map(const PhaseMapSpec& spec);
PhaseMap phase_map(const PhaseMapSpec& spec, const ReducedHamiltonian& k);

struct FrozenSearchOptions {
  int scan_points = 400;
  double e_tolerance = 1e-12;
  /// Relative to k_scale; 0 skips the residual filter.
  double residual_tolerance = 1e-10;
  /// Upper end of the scan; <= 0 means 0.95. Always limited by feasibility.
  double e_cap = 0;
};

/// Sign changes of dK/de along w = axis (+pi/2 or -pi/2), refined by bisection and
/// Newton polishing. Roots at e = 0 are left to frozen_2d; roots failing the residual
/// test are dropped.
std::vector<FrozenOrbit> frozen_on_axis(const ReducedHamiltonian& k, double axis, double k_scale,
                                        const FrozenSearchOptions& options = {});
std::vector<FrozenOrbit> frozen_on_axis(const PhaseMapSpec& spec, double axis, const FrozenSearchOptions& options = {});

struct Frozen2dResult {
  std::vector<FrozenOrbit> orbits;
  int failed_seeds = 0;
};

/// Damped Newton from each seed (x, y); results deduplicated within 1e-6. Degenerate
/// points sharing one e (an w-independent ring) collapse to a single entry.
Frozen2dResult frozen_2d(const ReducedHamiltonian& k, const std::vector<std::array<double, 2>>& seeds, double k_scale,
                         double residual_tolerance = 1e-10);
/// Seeds on an n x n Cartesian grid inside the feasible disk.
std::vector<std::array<double, 2>> seed_grid(double e_max, int n);
Frozen2dResult frozen_2d(const PhaseMapSpec& spec, int seeds_per_axis = 12);

/// All stationary points: both axis scans plus the 2-D search, deduplicated, sorted by e.
std::vector<FrozenOrbit> find_frozen(const ReducedHamiltonian& k, double e_max, double k_scale, int seeds_per_axis = 12);
std::vector<FrozenOrbit> find_frozen(const PhaseMapSpec& spec, int seeds_per_axis = 12);

struct RampFrame {
  int degree = 0;
  PhaseMap map;  ///< map.frozen holds the on-axis roots
};

/// One frame per degree (ascending, deduplicated). The long-period series grows
/// incrementally: each frame appends only its new degrees.
std::vector<RampFrame> ramp_models(const PhaseMapSpec& base, std::vector<int> degrees,
                                   const std::function<void(const RampFrame&)>& on_frame = {});

}  // namespace zonal
