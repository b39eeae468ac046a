#include "zonal/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "zonal/anomaly.hpp"
#include "zonal/dynamics.hpp"
#include "zonal/errors.hpp"
#include "zonal/hamiltonian.hpp"
#include "zonal/kaula.hpp"
#include "zonal/oracle.hpp"
#include "zonal/poisson_series.hpp"

namespace zonal {

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  double metric = 0;
  std::string detail;
};

CheckResult run_check(const std::string& name, double tolerance, const std::function<Outcome()>& body) {
  CheckResult r;
  r.name = name;
  r.tolerance = tolerance;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Outcome o = body();
    r.metric = o.metric;
    r.detail = o.detail;
    r.passed = std::isfinite(o.metric) && o.metric <= tolerance;
  } catch (const std::exception& ex) {
    r.passed = false;
    r.metric = std::numeric_limits<double>::infinity();
    r.detail = std::string("exception: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double relative(double a, double b, double scale) {
  const double d = std::abs(a - b);
  return scale > 0.0 ? d / scale : d;
}

/// Random orbits with periapsis at least 1.02 R.
class Sampler {
 public:
  Sampler(std::uint64_t seed, double radius) : rng_(seed), radius_(radius) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * u_(rng_); }

  OrbitGeometry orbit(double e_max) {
    const double e = uniform(0.0, e_max);
    const double a = radius_ * uniform(1.02, 3.02) / (1.0 - e);
    return OrbitGeometry(a, e, uniform(0.0, pi));
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> u_{0.0, 1.0};
  double radius_;
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

double w1(const GravityField& f, const DelaunayState& y) {
  const OrbitGeometry g = y.geometry(f.mu());
  return w1_parallax(f, g, y.g, true_from_mean(y.ell, g.e()));
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

VerifyReport run_verification(const GravityField& field, const VerifyOptions& opt) {
  const Tolerances& tol = default_tolerances();
  VerifyReport report;
  report.field_name = field.name();
  const double R = field.reference_radius();
  const int n_field = field.n_max();
  const int n_cap = std::clamp(opt.n_max, 2, n_field);
  std::uint64_t seed = opt.seed;

  report.checks.push_back(run_check("potential_identity", tol.potential_identity, [&] {
    Sampler rng(++seed, R);
    double worst = 0;
    std::vector<int> degrees;
    for (int n : opt.potential_degrees) degrees.push_back(std::clamp(n, 2, n_field));
    std::sort(degrees.begin(), degrees.end());
    degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
    for (int n : degrees) {
      const GravityField fn = field.truncated(n);
      for (int k = 0; k < opt.states; ++k) {
        const OrbitGeometry g = rng.orbit(0.9);
        const double node = rng.uniform(0, 2 * pi), w = rng.uniform(0, 2 * pi), f = rng.uniform(0, 2 * pi);
        const double u1 = element_potential(fn, g, w, f);
        const double u2 = direct_potential(fn, keplerian_to_spherical(g, node, w, f));
        worst = std::max(worst, relative(u1, u2, std::abs(u2)));
      }
    }
    std::string list;
    for (int n : degrees) list += (list.empty() ? "" : ",") + std::to_string(n);
    return Outcome{worst, "max relative error, n_max in {" + list + "}, " + std::to_string(opt.states) + " states each"};
  }));

  report.checks.push_back(run_check("averaging_identity", tol.averaging_identity, [&] {
    Sampler rng(++seed, R);
    const int top = std::clamp(opt.averaging_degree, 2, n_field);
    double worst = 0, worst_pointwise = 0;
    for (int k = 0; k < opt.states; ++k) {
      const OrbitGeometry g = rng.orbit(0.9);
      const double w = rng.uniform(0, 2 * pi);
      const InclinationTable F(top, g.s());
      for (int i = 2; i <= top; ++i) {
        if (field.zonal(i) == 0.0) continue;
        const double avg = averaged_vi(field, i, g, w);
        auto v = [&](double f) { return osculating_vi(field, i, g, w, f, F); };
        const double quad = average_over_true_anomaly(v, 2 * i);
        const double size = average_over_true_anomaly([&](double f) { return std::abs(v(f)); }, 2 * i);
        worst = std::max(worst, relative(avg, quad, std::max(std::abs(avg), size)));
        worst_pointwise = std::max(worst_pointwise, relative(avg, quad, std::abs(avg)));
      }
    }
    return Outcome{worst, "normwise relative error |<V_i> - quad| / max(|<V_i>|, <|V_i|>), i <= " +
                              std::to_string(top) + ", e < 0.9; pointwise " + fmt("%.2e", worst_pointwise)};
  }));

  report.checks.push_back(run_check("dual_provenance", tol.dual_provenance, [&] {
    Sampler rng(++seed, R);
    const GravityField fc = field.truncated(n_cap);
    const AveragedSeries series = build_mean_series(fc, n_cap);
    std::vector<PoissonSeries> brute;
    for (int i = 2; i <= n_cap; ++i) brute.push_back(brute_force_average(expand_vi(fc, i)));
    double worst = 0, worst_pointwise = 0;
    for (int k = 0; k < opt.states; ++k) {
      const OrbitGeometry g = rng.orbit(0.9);
      const double w = rng.uniform(0, 2 * pi);
      const std::vector<double> per = series.evaluate_by_degree(g, w);
      const PoissonPoint x = PoissonPoint::at(g, R, w, 0.0);
      double ks = 0, bs = 0, scale = 0;
      for (int i = 2; i <= n_cap; ++i) {
        ks += per[static_cast<std::size_t>(i)];
        bs += brute[static_cast<std::size_t>(i - 2)].evaluate(x);
        scale += std::abs(per[static_cast<std::size_t>(i)]);
        worst = std::max(worst, relative(ks, bs, scale));
        worst_pointwise = std::max(worst_pointwise, relative(ks, bs, std::abs(ks)));
      }
    }
    return Outcome{worst, "normwise relative error of every truncation 2.." + std::to_string(n_cap) +
                              " (scale sum_i |<V_i>|); pointwise " + fmt("%.2e", worst_pointwise) + "; " +
                              std::to_string(series.size()) + " Kaula terms"};
  }));

  report.checks.push_back(run_check("expansion_identity", tol.expansion_identity, [&] {
    Sampler rng(++seed, R);
    const int top = std::min(n_cap, 20);
    double worst = 0;
    for (int i = 2; i <= top; ++i) {
      const PoissonSeries vi = expand_vi(field, i);
      for (int k = 0; k < 20; ++k) {
        const OrbitGeometry g = rng.orbit(0.9);
        const double w = rng.uniform(0, 2 * pi), f = rng.uniform(0, 2 * pi);
        const InclinationTable F(i, g.s());
        double fsum = 0;
        for (int j = 0; j <= i; ++j) fsum += std::abs(F(i, j));
        const double bound = std::pow(R / g.a(), i) * std::abs(field.zonal(i)) / std::pow(g.eta(), 2 * i - 1) *
                             std::pow(1 + g.e(), i - 1) * fsum;
        worst = std::max(worst, relative(vi.evaluate(PoissonPoint::at(g, R, w, f)), osculating_vi(field, i, g, w, f),
                                         bound));
      }
    }
    return Outcome{worst, "expanded V_i vs closed form, i <= " + std::to_string(top) +
                              ", scale (R/a)^i |C_i| eta^-(2i-1) (1+e)^(i-1) sum_j |F_ij|"};
  }));

  report.checks.push_back(run_check("inclination_fourier", tol.fourier_identity, [&] {
    double worst = 0;
    const int top = std::min(std::max(opt.averaging_degree, 2), 60);
    for (double s : {0.1, 0.45, 0.8944, std::sin(88.0 * pi / 180.0), 1.0})
      for (int i = 0; i <= top; ++i) {
        const InclinationTable F(i, s);
        for (int j = 0; j <= i; ++j) worst = std::max(worst, std::abs(F(i, j) - fourier_fit_inclination(i, j, s)));
      }
    return Outcome{worst, "max |F_recurrence - F_projection|, i <= " + std::to_string(top)};
  }));

  report.checks.push_back(run_check("inclination_direct_low_degree", tol.fourier_identity, [&] {
    double worst = 0;
    for (double s : {0.1, 0.5, 0.9, 1.0})
      for (int i = 0; i <= 12; ++i)
        for (int j = 0; j <= i; ++j)
          worst = std::max(worst, std::abs(inclination_function(i, j, s) - inclination_function_direct(i, j, s)));
    return Outcome{worst, "recurrence vs explicit sum, i <= 12"};
  }));

  const GravityField low = field.truncated(std::min(n_field, 5));
  report.checks.push_back(run_check("second_order_bracket", tol.second_order_bracket, [&] {
    Sampler rng(++seed, R);
    const double mu = field.mu();
    double worst = 0;
    int warnings = 0;
    auto h10 = [&](const DelaunayState& y) {
      const OrbitGeometry g = y.geometry(mu);
      const double f = true_from_mean(y.ell, g.e());
      return -mu / g.a() * parallax_factor(g, f) * osculating_vi(low, 2, g, y.g, f);
    };
    auto h01 = [&](const DelaunayState& y) {
      const OrbitGeometry g = y.geometry(mu);
      const double f = true_from_mean(y.ell, g.e());
      return -mu / g.a() * parallax_factor(g, f) * averaged_vi(low, 2, g, y.g);
    };
    auto gen = [&](const DelaunayState& y) { return w1(low, y); };
    for (int k = 0; k < opt.bracket_states; ++k) {
      const double e = rng.uniform(0.05, 0.8), a = R * rng.uniform(1.1, 3.1), s = rng.uniform(0.2, 0.95);
      const double inc = rng.uniform(0, 1) < 0.5 ? std::asin(s) : pi - std::asin(s);
      const double ell = rng.uniform(0, 2 * pi), w = rng.uniform(0, 2 * pi), node = rng.uniform(0, 2 * pi);
      const DelaunayState x = DelaunayState::from_elements(mu, a, e, inc, ell, w, node);
      const BracketResult b1 = finite_difference_poisson_bracket(h01, gen, x);
      const BracketResult b2 = finite_difference_poisson_bracket(h10, gen, x);
      warnings += b1.accuracy_warning + b2.accuracy_warning;
      const OrbitGeometry g = x.geometry(mu);
      const double f = true_from_mean(ell, e);
      double h20 = 0;
      for (int i = 3; i <= low.n_max(); ++i) h20 += -2 * mu / a * parallax_factor(g, f) * osculating_vi(low, i, g, w, f);
      const double analytic = tilde_h02(low, x);
      worst = std::max(worst, relative(b1.value + b2.value + h20, analytic, std::abs(analytic)));
    }
    return Outcome{worst, "tilde_h02 vs {H01,W1}+{H10,W1}+H20, degrees 2.." + std::to_string(low.n_max()) + ", " +
                              std::to_string(warnings) + " cancellation warnings"};
  }));

  report.checks.push_back(run_check("w1_zero_mean", tol.w1_zero_mean, [&] {
    Sampler rng(++seed, R);
    double worst = 0;
    for (int k = 0; k < opt.bracket_states; ++k) {
      const OrbitGeometry g = rng.orbit(0.9);
      const double w = rng.uniform(0, 2 * pi);
      double amplitude = 0;
      const double mean = average_over_mean_anomaly(
          [&](double f) {
            const double v = w1_parallax(low, g, w, f);
            amplitude = std::max(amplitude, std::abs(v));
            return v;
          },
          g, 32);
      worst = std::max(worst, relative(mean, 0.0, amplitude));
    }
    return Outcome{worst, "|mean of W1 over l| / max|W1|"};
  }));

  report.checks.push_back(run_check("second_order_consistency", tol.second_order_consistency, [&] {
    Sampler rng(++seed, R);
    double worst = 0;
    for (int k = 0; k < opt.bracket_states; ++k) {
      const OrbitGeometry g = rng.orbit(0.9);
      const double w = rng.uniform(0, 2 * pi);
      const double quad =
          average_over_true_anomaly([&](double f) { return tilde_h02(low, g, w, f) / parallax_factor(g, f); }, 12);
      const double closed = h02_parallax_mean(low, g, w);
      worst = std::max(worst, relative(quad, closed, std::abs(closed)));
    }
    return Outcome{worst, "f-free part of tilde_h02 vs closed form"};
  }));

  report.checks.push_back(run_check("second_order_split", tol.second_order_consistency, [&] {
    Sampler rng(++seed, R);
    auto j2 = std::make_shared<const GravityField>(field.truncated(2));
    MeanModelSpec spec = MeanModelSpec::defaults(j2, 2);
    spec.include_j2sq = true;
    spec.include_centering = true;
    const MeanHamiltonian model(spec);
    double worst = 0;
    for (int k = 0; k < opt.bracket_states; ++k) {
      const OrbitGeometry g = rng.orbit(0.9);
      const double w = rng.uniform(0, 2 * pi);
      const double block = model.second_order(g, w);
      const double parts = 0.5 * (h02_delaunay_secular(*j2, g) + h02_parallax_mean(*j2, g, w, true));
      worst = std::max(worst, relative(block, parts, std::abs(parts)));
    }
    return Outcome{worst, "mean J2^2 block vs half the sum of the Delaunay and parallax pieces"};
  }));

  report.checks.push_back(run_check("quadrature_cross_check", tol.quadrature_doubling, [&] {
    Sampler rng(++seed, R);
    const int top = std::clamp(opt.averaging_degree, 2, n_field);
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      const OrbitGeometry g = rng.orbit(0.9);
      const double w = rng.uniform(0, 2 * pi);
      for (int i : {2, 3, top / 2, top}) {
        if (i < 2 || field.zonal(i) == 0.0) continue;
        auto v = [&](double f) { return osculating_vi(field, i, g, w, f); };
        const double base = average_over_true_anomaly(v, 2 * i);
        const double doubled = average_over_true_anomaly(v, 4 * i);
        const double gl = average_over_true_anomaly(v, 2 * i, QuadratureRule::gauss_legendre);
        const double size = average_over_true_anomaly([&](double f) { return std::abs(v(f)); }, 2 * i);
        worst = std::max({worst, relative(base, doubled, size), relative(base, gl, size)});
      }
    }
    return Outcome{worst, "trapezoid N vs 2N vs Gauss-Legendre, normwise"};
  }));

  report.checks.push_back(run_check("kepler_equation", tol.kepler_residual, [&] {
    Sampler rng(++seed, R);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
      const double m = rng.uniform(-10, 10), e = rng.uniform(0, 0.95);
      const double E = solve_kepler(m, e);
      worst = std::max(worst, std::abs(E - e * std::sin(E) - m));
      const double f = true_from_mean(m, e);
      worst = std::max(worst, std::abs(std::remainder(mean_from_true(f, e) - m, 2 * pi)));
    }
    return Outcome{worst, "Kepler residual and true/mean round trip, e < 0.95"};
  }));

  report.checks.push_back(run_check("term_count", 0.0, [&] {
    const AveragedSeries own = build_mean_series(field, n_field);
    const AveragedSeries fifty = build_mean_series(GravityField::kepler(field.mu(), R, 50), 50);
    const double mismatch =
        std::abs(static_cast<double>(own.size()) - static_cast<double>(mean_series_term_count(n_field))) +
        std::abs(static_cast<double>(fifty.size()) - 625.0) +
        std::abs(static_cast<double>(mean_series_term_count(50)) - 625.0);
    return Outcome{mismatch, std::to_string(own.size()) + " terms at n = " + std::to_string(n_field) + ", " +
                                 std::to_string(fifty.size()) + " at n = 50"};
  }));

  report.checks.push_back(run_check("axis_symmetry", 1e-12, [&] {
    auto shared = std::make_shared<const GravityField>(field);
    PhaseMapSpec spec;
    spec.a = 1.3 * R;
    spec.inclination_circular = 60.0 * pi / 180.0;
    spec.model = MeanModelSpec::defaults(shared, n_cap);
    spec.resolution = 32;
    const ReducedHamiltonian k(spec);
    const double scale = phase_map(spec, k).k_scale();
    double worst = 0;
    for (int t = 1; t <= 20; ++t) {
      const double e = spec.resolved_e_max() * t / 20.0;
      for (double sign : {-1.0, 1.0}) {
        const auto grad = k.gradient(0.0, sign * e);
        worst = std::max(worst, relative(e * grad[0], 0.0, scale));  // dK/dw = -y Kx on the axis
      }
    }
    return Outcome{worst, "|dK/dw| at w = +-90 deg relative to K_scale"};
  }));

  report.checks.push_back(run_check("degree2_omega_independence", 1e-14, [&] {
    auto shared = std::make_shared<const GravityField>(field);
    PhaseMapSpec spec;
    spec.a = 1.3 * R;
    spec.inclination_circular = 60.0 * pi / 180.0;
    spec.model = MeanModelSpec::defaults(shared, 2);
    spec.model.include_j2sq = false;
    spec.chart = GridChart::polar;
    spec.resolution = 32;
    const ReducedHamiltonian k(spec);
    const PhaseMap map = phase_map(spec, k);
    const double scale = map.k_scale();
    double worst = 0;
    for (int i0 = 0; i0 < map.resolution; ++i0) {
      double lo = INFINITY, hi = -INFINITY;
      for (int i1 = 0; i1 < map.resolution; ++i1) {
        if (map.masked(i0, i1)) continue;
        const double e = map.axis0[static_cast<std::size_t>(i0)], w = map.axis1[static_cast<std::size_t>(i1)];
        const double p = k.perturbation_at(e * std::cos(w), e * std::sin(w));
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
      if (hi >= lo) worst = std::max(worst, relative(hi, lo, scale));
    }
    return Outcome{worst, "spread over w at fixed e of the degree-2 map, relative to K_scale"};
  }));

  return report;
}

void to_json(nlohmann::json& j, const CheckResult& c) {
  j = nlohmann::json{{"name", c.name},
                     {"passed", c.passed},
                     {"metric", std::isfinite(c.metric) ? nlohmann::json(c.metric) : nlohmann::json(nullptr)},
                     {"tolerance", c.tolerance},
                     {"seconds", c.seconds},
                     {"detail", c.detail}};
}

void to_json(nlohmann::json& j, const VerifyReport& r) {
  j = nlohmann::json{{"field", r.field_name}, {"passed", r.passed()}, {"checks", r.checks}};
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream out;
  for (const CheckResult& c : report.checks) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %-30s metric=%.3e tol=%.1e (%.2fs)", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  c.metric, c.tolerance, c.seconds);
    out << buf << "  " << c.detail << '\n';
  }
  return out.str();
}

}  // namespace zonal
