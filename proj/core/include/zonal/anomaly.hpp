#pragma once

namespace zonal {

/// Solves E - e sin E = M for 0 <= e < 1; M is any real.
double solve_kepler(double mean_anomaly, double e);

double true_from_eccentric(double eccentric_anomaly, double e);
double eccentric_from_true(double true_anomaly, double e);
double mean_from_true(double true_anomaly, double e);
double true_from_mean(double mean_anomaly, double e);

/// Consistent set of anomalies for one point on the orbit.
struct AnomalySet {
  double f = 0;      ///< true anomaly
  double E = 0;      ///< eccentric anomaly
  double M = 0;      ///< mean anomaly (Delaunay l)
  double theta = 0;  ///< argument of latitude f + omega
  double center = 0; ///< equation of the center f - M

  static AnomalySet from_mean(double mean_anomaly, double e, double omega);
  static AnomalySet from_true(double true_anomaly, double e, double omega);
};

}  // namespace zonal
