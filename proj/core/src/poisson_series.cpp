#include "zonal/poisson_series.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

extern "C" {
#include <quadmath.h>
}

#include "zonal/errors.hpp"

namespace zonal {

namespace {

constexpr int kBits = 10;
constexpr std::uint64_t kMask = (1u << kBits) - 1;

std::uint64_t pack(const Exponents& x) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < symbol_count; ++k) {
    if (x.power[k] > kMask) throw DomainError("Poisson exponent exceeds 1023");
    v |= static_cast<std::uint64_t>(x.power[k]) << (kBits * k);
  }
  return v;
}

Exponents unpack(std::uint64_t v) {
  Exponents x;
  for (std::size_t k = 0; k < symbol_count; ++k) x.power[k] = static_cast<std::uint16_t>((v >> (kBits * k)) & kMask);
  return x;
}

Exponents multiply(const Exponents& a, const Exponents& b) {
  Exponents r;
  for (std::size_t k = 0; k < symbol_count; ++k) r.power[k] = static_cast<std::uint16_t>(a.power[k] + b.power[k]);
  const std::uint16_t common = std::min(r[Symbol::eta], r[Symbol::eta_inv]);
  r[Symbol::eta] = static_cast<std::uint16_t>(r[Symbol::eta] - common);
  r[Symbol::eta_inv] = static_cast<std::uint16_t>(r[Symbol::eta_inv] - common);
  return r;
}

struct Key {
  std::uint64_t mono;
  std::int32_t k_f;
  std::int32_t k_omega;
  Trig trig;

  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = k.mono * 0x9E3779B97F4A7C15ull;
    h ^= (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k.k_f)) << 32 |
          static_cast<std::uint32_t>(k.k_omega)) * 0xC2B2AE3D27D4EB4Full;
    h ^= static_cast<std::uint64_t>(k.trig) + (h >> 31);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Accumulates terms under canonical angle normalisation.
class Accumulator {
 public:
  explicit Accumulator(std::size_t hint = 0) { map_.reserve(hint); }

  void add(Real128 c, std::uint64_t mono, int k_f, int k_omega, Trig trig) {
    if (k_f < 0 || (k_f == 0 && k_omega < 0)) {
      k_f = -k_f;
      k_omega = -k_omega;
      if (trig == Trig::sin) c = -c;
    }
    if (k_f == 0 && k_omega == 0 && trig == Trig::sin) return;
    map_[Key{mono, k_f, k_omega, trig}] += c;
  }

  void add(const PoissonTerm& t) { add(t.coefficient, pack(t.exponents), t.k_f, t.k_omega, t.trig); }

  void add_product(const PoissonSeries& a, const PoissonSeries& b) {
    for (const PoissonTerm& x : a.terms()) {
      for (const PoissonTerm& y : b.terms()) {
        const std::uint64_t mono = pack(multiply(x.exponents, y.exponents));
        const Real128 c = x.coefficient * y.coefficient * static_cast<Real128>(0.5);
        const int sf = x.k_f + y.k_f, sw = x.k_omega + y.k_omega;
        const int df = x.k_f - y.k_f, dw = x.k_omega - y.k_omega;
        if (x.trig == Trig::cos && y.trig == Trig::cos) {
          add(c, mono, df, dw, Trig::cos);
          add(c, mono, sf, sw, Trig::cos);
        } else if (x.trig == Trig::sin && y.trig == Trig::sin) {
          add(c, mono, df, dw, Trig::cos);
          add(-c, mono, sf, sw, Trig::cos);
        } else if (x.trig == Trig::sin) {
          add(c, mono, sf, sw, Trig::sin);
          add(c, mono, df, dw, Trig::sin);
        } else {
          add(c, mono, sf, sw, Trig::sin);
          add(-c, mono, df, dw, Trig::sin);
        }
      }
    }
  }

  std::vector<PoissonTerm> finish() {
    std::vector<PoissonTerm> out;
    out.reserve(map_.size());
    for (const auto& [key, c] : map_) {
      if (c == 0) continue;
      out.push_back(PoissonTerm{c, unpack(key.mono), key.k_f, key.k_omega, key.trig});
    }
    std::sort(out.begin(), out.end(), [](const PoissonTerm& x, const PoissonTerm& y) {
      return std::tie(x.k_f, x.k_omega, x.trig, x.exponents) < std::tie(y.k_f, y.k_omega, y.trig, y.exponents);
    });
    map_.clear();
    return out;
  }

 private:
  std::unordered_map<Key, Real128, KeyHash> map_;
};

Real128 binomial128(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Real128 r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

bool same_angle(const PoissonTerm& x, const PoissonTerm& y) {
  return x.k_f == y.k_f && x.k_omega == y.k_omega && x.trig == y.trig;
}

}  // namespace

PoissonPoint PoissonPoint::at(const OrbitGeometry& g, double reference_radius, double omega, double f) {
  return PoissonPoint{g.e(), g.s(), g.c(), g.eta(), reference_radius / g.a(), f, omega};
}

PoissonSeries PoissonSeries::constant(Real128 value) { return monomial(value, Exponents{}); }

PoissonSeries PoissonSeries::monomial(Real128 coefficient, const Exponents& exponents) {
  return from_terms({PoissonTerm{coefficient, exponents, 0, 0, Trig::cos}});
}

PoissonSeries PoissonSeries::trig(int k_f, int k_omega, Trig selector, Real128 coefficient) {
  return from_terms({PoissonTerm{coefficient, Exponents{}, k_f, k_omega, selector}});
}

PoissonSeries PoissonSeries::from_terms(std::vector<PoissonTerm> terms) {
  Accumulator acc(terms.size());
  for (const PoissonTerm& t : terms) acc.add(t);
  PoissonSeries s;
  s.terms_ = acc.finish();
  return s;
}

Real128 PoissonSeries::evaluate_extended(const PoissonPoint& x) const {
  if (terms_.empty()) return 0;
  std::array<std::uint16_t, symbol_count> top{};
  for (const PoissonTerm& t : terms_)
    for (std::size_t k = 0; k < symbol_count; ++k) top[k] = std::max(top[k], t.exponents.power[k]);
  const std::array<Real128, symbol_count> base{static_cast<Real128>(x.e),   static_cast<Real128>(x.s),
                                               static_cast<Real128>(x.c),   static_cast<Real128>(x.eta),
                                               1 / static_cast<Real128>(x.eta), static_cast<Real128>(x.ratio)};
  std::array<std::vector<Real128>, symbol_count> pw;
  for (std::size_t k = 0; k < symbol_count; ++k) {
    pw[k].resize(static_cast<std::size_t>(top[k]) + 1);
    pw[k][0] = 1;
    for (std::size_t n = 1; n < pw[k].size(); ++n) pw[k][n] = pw[k][n - 1] * base[k];
  }
  Real128 total = 0;
  std::size_t i = 0;
  while (i < terms_.size()) {
    const PoissonTerm& head = terms_[i];
    Real128 group = 0;
    std::size_t j = i;
    for (; j < terms_.size() && same_angle(head, terms_[j]); ++j) {
      Real128 v = terms_[j].coefficient;
      for (std::size_t k = 0; k < symbol_count; ++k) v *= pw[k][terms_[j].exponents.power[k]];
      group += v;
    }
    const Real128 arg = static_cast<Real128>(head.k_f) * x.f + static_cast<Real128>(head.k_omega) * x.omega;
    Real128 trig = 1;
    if (head.k_f != 0 || head.k_omega != 0) trig = head.trig == Trig::cos ? cosq(arg) : sinq(arg);
    total += group * trig;
    i = j;
  }
  return total;
}

PoissonSeries PoissonSeries::scaled(Real128 factor) const {
  PoissonSeries out;
  if (factor != 0) {
    out.terms_ = terms_;
    for (PoissonTerm& t : out.terms_) t.coefficient *= factor;
  }
  out.min_degree_ = min_degree_;
  out.max_degree_ = max_degree_;
  return out;
}

void PoissonSeries::dump(std::ostream& out) const {
  static constexpr const char* names[symbol_count] = {"e", "s", "c", "eta", "etainv", "(R/a)"};
  for (const PoissonTerm& t : terms_) {
    out << to_string(t.coefficient) << " *";
    for (std::size_t k = 0; k < symbol_count; ++k) out << ' ' << names[k] << '^' << t.exponents.power[k];
    out << " * " << (t.trig == Trig::cos ? "cos" : "sin") << '(' << t.k_f << " f "
        << (t.k_omega < 0 ? "- " : "+ ") << std::abs(t.k_omega) << " w)\n";
  }
}

std::string PoissonSeries::dump() const {
  std::ostringstream os;
  dump(os);
  return os.str();
}

PoissonSeries canonicalize(const PoissonSeries& s) {
  PoissonSeries out = PoissonSeries::from_terms(s.terms());
  out.set_degree_range(s.min_degree(), s.max_degree());
  return out;
}

PoissonSeries series_add(const PoissonSeries& a, const PoissonSeries& b) {
  Accumulator acc(a.size() + b.size());
  for (const PoissonTerm& t : a.terms()) acc.add(t);
  for (const PoissonTerm& t : b.terms()) acc.add(t);
  PoissonSeries out = PoissonSeries::from_terms(acc.finish());
  const int lo = a.empty() ? b.min_degree() : (b.empty() ? a.min_degree() : std::min(a.min_degree(), b.min_degree()));
  out.set_degree_range(lo, std::max(a.max_degree(), b.max_degree()));
  return out;
}

PoissonSeries series_mul(const PoissonSeries& a, const PoissonSeries& b) {
  Accumulator acc(a.size() * b.size());
  acc.add_product(a, b);
  return PoissonSeries::from_terms(acc.finish());
}

PoissonSeries expand_vi(const GravityField& field, int i) {
  if (i < 2 || i > field.n_max()) throw DomainError("expand_vi: degree outside field range");
  const Real128 ci = field.zonal(i);
  PoissonSeries result;
  result.set_degree_range(i, i);
  if (ci == 0) return result;

  const PoissonSeries cos_f = PoissonSeries::trig(1, 0, Trig::cos);
  Exponents e1;
  e1[Symbol::e] = 1;
  const PoissonSeries e_cos_f = series_mul(PoissonSeries::monomial(1, e1), cos_f);

  // sum_k binom(i-1, k) (e cos f)^k with each power linearised.
  PoissonSeries radial = PoissonSeries::constant(1);
  PoissonSeries power = PoissonSeries::constant(1);
  for (int k = 1; k <= i - 1; ++k) {
    power = series_mul(power, e_cos_f);
    radial = series_add(radial, power.scaled(binomial128(i - 1, k)));
  }

  const bool odd = i % 2 == 1;
  const int i0 = i / 2;
  Accumulator acc;
  for (int j = 0; j <= i; ++j) {
    std::vector<PoissonTerm> poly;
    Real128 t = 1;
    for (int k = 1; k <= i; ++k) t *= static_cast<Real128>(2 * k - 1) / (2 * k);
    for (int l = 0; l <= std::min(j, i0); ++l) {
      const int pw = i - 2 * l;
      const Real128 b = binomial128(pw, j - l);
      if (b != 0) {
        Exponents x;
        x[Symbol::s] = static_cast<std::uint16_t>(pw);
        x[Symbol::ratio] = static_cast<std::uint16_t>(i);
        x[Symbol::eta_inv] = static_cast<std::uint16_t>(2 * i - 1);
        const Real128 sign = ((j - l - i0) % 2 == 0) ? 1 : -1;
        poly.push_back(PoissonTerm{sign * t * b * ci, x, 0, 0, Trig::cos});
      }
      if (pw >= 2) t *= static_cast<Real128>(2 * pw * (pw - 1)) / ((l + 1) * (2 * (i - l) - 1));
    }
    const int m = i - 2 * j;
    const PoissonSeries angle = PoissonSeries::trig(m, m, odd ? Trig::sin : Trig::cos);
    acc.add_product(PoissonSeries::from_terms(std::move(poly)), series_mul(radial, angle));
  }
  result = PoissonSeries::from_terms(acc.finish());
  result.set_degree_range(i, i);
  return result;
}

PoissonSeries brute_force_average(const PoissonSeries& s) {
  std::vector<PoissonTerm> kept;
  for (const PoissonTerm& t : s.terms())
    if (t.k_f == 0) kept.push_back(t);
  PoissonSeries out = PoissonSeries::from_terms(std::move(kept));
  out.set_degree_range(s.min_degree(), s.max_degree());
  return out;
}

PoissonSeries brute_force_mean_series(const GravityField& field, int n_max) {
  if (n_max < 2 || n_max > field.n_max()) throw DomainError("brute_force_mean_series: degree outside field range");
  PoissonSeries total;
  for (int i = 2; i <= n_max; ++i) total = series_add(total, brute_force_average(expand_vi(field, i)));
  total.set_degree_range(2, n_max);
  return total;
}

std::string to_string(Real128 value, int digits) {
  char buf[128];
  quadmath_snprintf(buf, sizeof buf, "%.*Qe", digits - 1, value);
  return buf;
}

}  // namespace zonal
