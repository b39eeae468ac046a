#include "zonal/kaula.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "zonal/errors.hpp"

namespace zonal {

namespace {

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

void check_degree(const GravityField& field, int i) {
  if (i < 2 || i > field.n_max())
    throw DomainError("degree " + std::to_string(i) + " outside 2.." + std::to_string(field.n_max()));
}

/// Index into G's layout: hat_j = j if i >= 2j else i - j.
int hat_index(int i, int j) { return i >= 2 * j ? j : i - j; }

}  // namespace

IndexSet index_set(int i, int m) {
  IndexSet ix;
  ix.i_star = i % 2;
  ix.i_pi = ix.i_star ? std::numbers::pi / 2 : 0.0;
  ix.i_m = floor_div(i - m, 2);
  ix.i_m_star = ix.i_m + ix.i_star;
  return ix;
}

OrbitGeometry::OrbitGeometry(double a, double e, double inclination) : a_(a), e_(e), inc_(inclination) {
  if (!(inclination >= 0.0 && inclination <= std::numbers::pi))
    throw DomainError("inclination must lie in [0, pi]");
  s_ = std::sin(inclination);
  c_ = std::cos(inclination);
  derive();
}

OrbitGeometry OrbitGeometry::from_sin_cos(double a, double e, double s, double c) {
  if (!(s >= 0.0 && s <= 1.0) || !(c >= -1.0 && c <= 1.0) || std::abs(s * s + c * c - 1.0) > 1e-12)
    throw DomainError("sin/cos inclination pair is inconsistent");
  OrbitGeometry g;
  g.a_ = a;
  g.e_ = e;
  g.s_ = s;
  g.c_ = c;
  g.inc_ = std::atan2(s, c);
  g.derive();
  return g;
}

void OrbitGeometry::derive() {
  if (!(a_ > 0.0) || !std::isfinite(a_)) throw DomainError("semi-major axis must be positive");
  if (!(e_ >= 0.0 && e_ < 1.0)) throw DomainError("eccentricity must satisfy 0 <= e < 1");
  eta_ = std::sqrt((1.0 - e_) * (1.0 + e_));
  p_ = a_ * eta_ * eta_;
}

double OrbitGeometry::radius(double f) const noexcept { return p_ / (1.0 + e_ * std::cos(f)); }

InclinationTable::InclinationTable(int n_max, double s, bool with_derivative) : n_max_(std::max(n_max, 1)) {
  if (!(std::abs(s) <= 1.0)) throw DomainError("|sin I| must not exceed 1");
  values_.assign(offset(n_max_ + 1), 0.0);
  values_[offset(0)] = 1.0;
  values_[offset(1)] = 0.5 * s;
  values_[offset(1) + 1] = -0.5 * s;
  auto at = [this](int i, int j) -> double {
    return (j < 0 || j > i) ? 0.0 : values_[offset(i) + static_cast<std::size_t>(j)];
  };
  for (int i = 1; i < n_max_; ++i) {
    const double eps = (i % 2 == 0) ? 1.0 : -1.0;
    const double k = 0.5 * (2 * i + 1) * s * eps;
    for (int j = 0; j <= i + 1; ++j) {
      values_[offset(i + 1) + static_cast<std::size_t>(j)] =
          (k * (at(i, j) - at(i, j - 1)) - i * at(i - 1, j - 1)) / (i + 1);
    }
  }
  if (!with_derivative) return;
  derivs_.assign(values_.size(), 0.0);
  derivs_[offset(1)] = 0.5;
  derivs_[offset(1) + 1] = -0.5;
  auto dat = [this](int i, int j) -> double {
    return (j < 0 || j > i) ? 0.0 : derivs_[offset(i) + static_cast<std::size_t>(j)];
  };
  for (int i = 1; i < n_max_; ++i) {
    const double eps = (i % 2 == 0) ? 1.0 : -1.0;
    const double dk = 0.5 * (2 * i + 1) * eps;
    const double k = dk * s;
    for (int j = 0; j <= i + 1; ++j) {
      derivs_[offset(i + 1) + static_cast<std::size_t>(j)] =
          (dk * (at(i, j) - at(i, j - 1)) + k * (dat(i, j) - dat(i, j - 1)) - i * dat(i - 1, j - 1)) / (i + 1);
    }
  }
}

double inclination_function(int i, int j, double s) {
  if (i < 0 || j < 0 || j > i) throw DomainError("inclination_function: need 0 <= j <= i");
  return InclinationTable(i, s)(i, j);
}

double inclination_function_direct(int i, int j, double s) {
  if (i < 0 || j < 0 || j > i) throw DomainError("inclination_function_direct: need 0 <= j <= i");
  if (!(std::abs(s) <= 1.0)) throw DomainError("|sin I| must not exceed 1");
  const int i0 = i / 2;
  // T_l = (2i-2l)! / (4^(i-l) l! (i-l)! (i-2l)!), starting from binom(2i, i)/4^i.
  double t = 1.0;
  for (int k = 1; k <= i; ++k) t *= (2.0 * k - 1.0) / (2.0 * k);
  double sum = 0.0;
  for (int l = 0; l <= std::min(j, i0); ++l) {
    const int power = i - 2 * l;
    const double sign = ((j - l - i0) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * t * binomial(power, j - l) * std::pow(s, power);
    if (power >= 2) t *= 2.0 * power * (power - 1) / ((l + 1.0) * (2.0 * (i - l) - 1.0));
  }
  return sum;
}

double eccentricity_function(int i, int j, double e) {
  if (i < 0 || j < 0 || j > i) throw DomainError("eccentricity_function: need 0 <= j <= i");
  if (!(e >= 0.0 && e < 1.0)) throw DomainError("eccentricity must satisfy 0 <= e < 1");
  const int hj = hat_index(i, j);
  const double eta = std::sqrt((1.0 - e) * (1.0 + e));
  double sum = 0.0;
  for (int l = 0; l <= hj - 1; ++l) {
    const int q = 2 * l + i - 2 * hj;
    sum += binomial(i - 1, q) * binomial(q, l) * std::pow(0.5 * e, q);
  }
  return sum / std::pow(eta, 2 * i - 1);
}

double osculating_vi(const GravityField& field, int i, const OrbitGeometry& g, double omega, double f) {
  check_degree(field, i);
  if (field.zonal(i) == 0.0) return 0.0;
  return osculating_vi(field, i, g, omega, f, InclinationTable(i, g.s()));
}

double osculating_vi(const GravityField& field, int i, const OrbitGeometry& g, double omega, double f,
                     const InclinationTable& F) {
  check_degree(field, i);
  if (F.n_max() < i) throw DomainError("inclination table too small for degree");
  const double ci = field.zonal(i);
  if (ci == 0.0) return 0.0;
  const double theta = f + omega;
  const bool odd = i % 2 == 1;
  double angular = 0.0;
  for (int j = 0; j <= i; ++j) {
    const double arg = (i - 2 * j) * theta;
    angular += F(i, j) * (odd ? std::sin(arg) : std::cos(arg));
  }
  // sum_k binom(i-1,k) (e cos f)^k in closed form; the expanded sum cancels for large e.
  const double radial = std::pow(1.0 + g.e() * std::cos(f), i - 1);
  return std::pow(field.reference_radius() / g.a(), i) * ci / std::pow(g.eta(), 2 * i - 1) * radial * angular;
}

double averaged_vi(const GravityField& field, int i, const OrbitGeometry& g, double omega) {
  check_degree(field, i);
  const double ci = field.zonal(i);
  if (ci == 0.0) return 0.0;
  const InclinationTable F(i, g.s());
  const IndexSet ix = index_set(i, 0);
  const int i0s = i / 2 + ix.i_star;
  const int i2 = floor_div(i - 2, 2);
  double sum = 0.0;
  for (int j = 0; j <= i2; ++j) {
    const int k = i0s + j;
    const double delta = (j + ix.i_star == 0) ? 1.0 : 2.0;
    const double arg = (2 * j + ix.i_star) * omega;
    const double trig = ix.i_star ? -std::sin(arg) : std::cos(arg);
    sum += delta * F(i, k) * eccentricity_function(i, k, g.e()) * trig;
  }
  return std::pow(field.reference_radius() / g.a(), i) * ci * sum;
}

std::vector<PowerReductionTerm> cos_power_reduction(int k, int m) {
  if (k < 0) throw DomainError("cos_power_reduction: k must be non-negative");
  std::map<int, double> merged;
  const double scale = std::ldexp(1.0, -k);
  for (int l = 0; l <= k; ++l) merged[m - k + 2 * l] += binomial(k, k - l) * scale;
  std::vector<PowerReductionTerm> out;
  out.reserve(merged.size());
  for (const auto& [mult, w] : merged) out.push_back({mult, w});
  return out;
}

void AveragedSeries::append_degree(const GravityField& field, int i) {
  check_degree(field, i);
  if (i <= n_max_ && !terms_.empty()) throw DomainError("degree already present in series");
  radius_ = field.reference_radius();
  const IndexSet ix = index_set(i, 0);
  const int i0s = i / 2 + ix.i_star;
  const int i2 = floor_div(i - 2, 2);
  const double ci = field.zonal(i);
  for (int j = 0; j <= i2; ++j) {
    AveragedTerm t;
    t.degree = i;
    t.j = j;
    t.kaula_index = i0s + j;
    t.multiplier = 2 * j + ix.i_star;
    t.phase = ix.i_pi;
    t.weight = ((j + ix.i_star == 0) ? 1.0 : 2.0) * ci;
    t.ecc_begin = ecc_.size();
    const int hj = hat_index(i, t.kaula_index);
    for (int l = 0; l <= hj - 1; ++l) {
      const int q = 2 * l + i - 2 * hj;
      ecc_.push_back({q, binomial(i - 1, q) * binomial(q, l) * std::ldexp(1.0, -q)});
    }
    t.ecc_end = ecc_.size();
    terms_.push_back(t);
  }
  n_max_ = i;
}

void AveragedSeries::extend(const GravityField& field, int n_max) {
  if (n_max > field.n_max()) throw DomainError("series degree exceeds field n_max");
  for (int i = std::max(2, n_max_ + 1); i <= n_max; ++i) append_degree(field, i);
}

template <typename Sink>
void AveragedSeries::accumulate(const OrbitGeometry& g, double omega, Sink&& sink) const {
  if (terms_.empty()) return;
  const int n = n_max_;
  const InclinationTable F(n, g.s());
  std::vector<double> epow(static_cast<std::size_t>(n) + 1), ratio(static_cast<std::size_t>(n) + 1),
      inv_eta_pow(static_cast<std::size_t>(n) + 1), cosk(static_cast<std::size_t>(n) + 1),
      sink_(static_cast<std::size_t>(n) + 1);
  const double rho = radius_ / g.a();
  const double inv_eta2 = 1.0 / (g.eta() * g.eta());
  epow[0] = 1.0;
  ratio[0] = 1.0;
  inv_eta_pow[0] = g.eta();  // entry i holds eta^-(2i-1)
  for (int k = 1; k <= n; ++k) {
    epow[k] = epow[k - 1] * g.e();
    ratio[k] = ratio[k - 1] * rho;
    inv_eta_pow[k] = inv_eta_pow[k - 1] * inv_eta2;
  }
  const double c1 = std::cos(omega), s1 = std::sin(omega);
  cosk[0] = 1.0;
  sink_[0] = 0.0;
  for (int k = 1; k <= n; ++k) {
    cosk[k] = cosk[k - 1] * c1 - sink_[k - 1] * s1;
    sink_[k] = sink_[k - 1] * c1 + cosk[k - 1] * s1;
  }
  for (const AveragedTerm& t : terms_) {
    if (t.weight == 0.0) continue;
    double poly = 0.0;
    for (std::size_t m = t.ecc_begin; m < t.ecc_end; ++m) poly += ecc_[m].coefficient * epow[ecc_[m].power];
    const double trig = (t.degree % 2 == 1) ? -sink_[t.multiplier] : cosk[t.multiplier];
    sink(t.degree, t.weight * ratio[t.degree] * F(t.degree, t.kaula_index) * poly * inv_eta_pow[t.degree] * trig);
  }
}

double AveragedSeries::evaluate(const OrbitGeometry& g, double omega) const {
  double sum = 0.0;
  accumulate(g, omega, [&sum](int, double v) { sum += v; });
  return sum;
}

std::vector<double> AveragedSeries::evaluate_by_degree(const OrbitGeometry& g, double omega) const {
  std::vector<double> out(static_cast<std::size_t>(std::max(n_max_, 1)) + 1, 0.0);
  accumulate(g, omega, [&out](int i, double v) { out[static_cast<std::size_t>(i)] += v; });
  return out;
}

SeriesPartials AveragedSeries::evaluate_partials(const OrbitGeometry& g, double omega) const {
  SeriesPartials out;
  if (terms_.empty()) return out;
  const int n = n_max_;
  const InclinationTable F(n, g.s(), true);
  const std::size_t len = static_cast<std::size_t>(n) + 2;
  std::vector<double> epow(len), ratio(len), inv_eta_pow(len), cosk(len), sink(len);
  const double e = g.e(), eta = g.eta();
  const double rho = radius_ / g.a();
  const double inv_eta2 = 1.0 / (eta * eta);
  epow[0] = 1.0;
  ratio[0] = 1.0;
  inv_eta_pow[0] = eta;
  for (std::size_t k = 1; k < len; ++k) {
    epow[k] = epow[k - 1] * e;
    ratio[k] = ratio[k - 1] * rho;
    inv_eta_pow[k] = inv_eta_pow[k - 1] * inv_eta2;
  }
  const double c1 = std::cos(omega), s1 = std::sin(omega);
  cosk[0] = 1.0;
  sink[0] = 0.0;
  for (std::size_t k = 1; k < len; ++k) {
    cosk[k] = cosk[k - 1] * c1 - sink[k - 1] * s1;
    sink[k] = sink[k - 1] * c1 + cosk[k - 1] * s1;
  }
  for (const AveragedTerm& t : terms_) {
    if (t.weight == 0.0) continue;
    double poly = 0.0, dpoly = 0.0, poly_e = 0.0;
    for (std::size_t m = t.ecc_begin; m < t.ecc_end; ++m) {
      const EccentricityMonomial& q = ecc_[m];
      poly += q.coefficient * epow[static_cast<std::size_t>(q.power)];
      if (q.power > 0) {
        dpoly += q.coefficient * q.power * epow[static_cast<std::size_t>(q.power - 1)];
        poly_e += q.coefficient * epow[static_cast<std::size_t>(q.power - 1)];
      }
    }
    const bool odd = t.degree % 2 == 1;
    const auto mm = static_cast<std::size_t>(t.multiplier);
    const double trig = odd ? -sink[mm] : cosk[mm];
    const double dtrig = -t.multiplier * (odd ? cosk[mm] : sink[mm]);
    const auto i = static_cast<std::size_t>(t.degree);
    const double scale = t.weight * ratio[i];
    const double f = F(t.degree, t.kaula_index), df = F.derivative(t.degree, t.kaula_index);
    const double ecc = poly * inv_eta_pow[i];
    const double decc = (dpoly + poly * (2.0 * t.degree - 1.0) * e * inv_eta2) * inv_eta_pow[i];
    out.value += scale * f * ecc * trig;
    out.d_e += scale * f * decc * trig;
    out.d_s += scale * df * ecc * trig;
    out.d_omega += scale * f * ecc * dtrig;
    out.d_omega_over_e += t.multiplier == 0 ? 0.0 : scale * f * poly_e * inv_eta_pow[i] * dtrig;
  }
  return out;
}

AveragedSeries build_mean_series(const GravityField& field, int n_max) {
  if (n_max < 2 || n_max > field.n_max()) throw DomainError("build_mean_series: need 2 <= n_max <= field n_max");
  AveragedSeries series;
  series.extend(field, n_max);
  return series;
}

std::size_t mean_series_term_count(int n_max) noexcept {
  std::size_t count = 0;
  for (int i = 2; i <= n_max; ++i) count += static_cast<std::size_t>((i - 2) / 2 + 1);
  return count;
}

}  // namespace zonal
