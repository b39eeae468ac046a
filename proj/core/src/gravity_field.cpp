#include "zonal/gravity_field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "zonal/errors.hpp"

#ifndef ZONAL_DEFAULT_FIELD
#define ZONAL_DEFAULT_FIELD "data/moon_grail_50.gfc"
#endif

namespace zonal {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> to_double(std::string_view token) {
  std::string buf(trim(token));
  // Fortran exponents appear in some ICGEM products.
  std::replace(buf.begin(), buf.end(), 'D', 'e');
  std::replace(buf.begin(), buf.end(), 'd', 'e');
  if (!buf.empty() && buf.front() == '+') buf.erase(buf.begin());
  double value = 0.0;
  const auto* end = buf.data() + buf.size();
  auto [ptr, ec] = std::from_chars(buf.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> to_int(std::string_view token) {
  token = trim(token);
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

struct RawField {
  std::string name;
  std::optional<double> mu;
  std::optional<double> radius;
  double rotation_rate = 0.0;
  bool normalized = true;
  std::map<std::pair<int, int>, CoefficientRecord> records;
};

void add_record(RawField& raw, std::size_t line, int n, int m, double c, double s) {
  if (n < 0 || m < 0 || m > n) throw ParseError(line, "degree/order out of range");
  if (m == 0 && s != 0.0) throw ParseError(line, "S coefficient must be zero for m = 0");
  CoefficientRecord rec{n, m, c, s, raw.normalized};
  if (!raw.records.emplace(std::make_pair(n, m), rec).second) throw DuplicateError(line, n, m);
}

GravityField assemble(RawField raw, std::string name) {
  if (!raw.mu || !(*raw.mu > 0.0)) throw MetadataError("gravitational parameter missing or not positive");
  if (!raw.radius || !(*raw.radius > 0.0)) throw MetadataError("reference radius missing or not positive");
  int n_max = 2;
  for (const auto& [key, rec] : raw.records) n_max = std::max(n_max, key.first);
  std::vector<double> zonals(static_cast<std::size_t>(n_max) + 1, 0.0);
  zonals[0] = 1.0;
  std::vector<CoefficientRecord> tesserals;
  for (const auto& [key, rec] : raw.records) {
    if (rec.order == 0) {
      if (rec.degree >= 1) zonals[static_cast<std::size_t>(rec.degree)] = unnormalize(rec).c;
    } else {
      tesserals.push_back(rec);
    }
  }
  if (name.empty()) name = raw.name;
  return GravityField(std::move(name), *raw.mu, *raw.radius, std::move(zonals), raw.rotation_rate,
                      std::move(tesserals), raw.normalized);
}

GravityField parse_icgem(std::istream& in, std::string name) {
  RawField raw;
  std::string line;
  std::size_t line_no = 0;
  bool in_header = true;
  bool seen_end = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (in_header) {
      if (tokens.empty()) continue;
      const std::string key = lower(tokens[0]);
      if (key.rfind("end_of_head", 0) == 0) {
        in_header = false;
        seen_end = true;
        continue;
      }
      if (tokens.size() < 2) continue;
      if (key == "earth_gravity_constant" || key == "gravity_constant") {
        auto v = to_double(tokens[1]);
        if (!v) throw ParseError(line_no, "invalid gravity constant");
        raw.mu = *v * 1e-9;
      } else if (key == "radius") {
        auto v = to_double(tokens[1]);
        if (!v) throw ParseError(line_no, "invalid radius");
        raw.radius = *v * 1e-3;
      } else if (key == "modelname") {
        raw.name = std::string(tokens[1]);
      } else if (key == "norm") {
        const std::string value = lower(tokens[1]);
        if (value == "fully_normalized") raw.normalized = true;
        else if (value == "unnormalized") raw.normalized = false;
        else throw ParseError(line_no, "unknown normalization '" + std::string(tokens[1]) + "'");
      }
      continue;
    }
    if (tokens.empty()) continue;
    const std::string key = lower(tokens[0]);
    if (key != "gfc") {
      if (key == "gfct" || key == "trnd" || key == "acos" || key == "asin" || key == "dot")
        throw ParseError(line_no, "time-variable coefficients are not supported");
      throw ParseError(line_no, "unknown keyword '" + std::string(tokens[0]) + "'");
    }
    if (tokens.size() < 5) throw ParseError(line_no, "gfc line needs n m C S");
    auto n = to_int(tokens[1]);
    auto m = to_int(tokens[2]);
    auto c = to_double(tokens[3]);
    auto s = to_double(tokens[4]);
    if (!n || !m || !c || !s) throw ParseError(line_no, "malformed gfc line");
    add_record(raw, line_no, *n, *m, *c, *s);
  }
  if (!seen_end) throw ParseError(line_no, "missing end_of_head");
  return assemble(std::move(raw), std::move(name));
}

bool parse_bool(std::string_view v, std::size_t line) {
  const std::string s = lower(trim(v));
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError(line, "invalid boolean '" + s + "'");
}

GravityField parse_csv(std::istream& in, std::string name) {
  RawField raw;
  raw.normalized = false;
  bool normalized_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const auto eq = text.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string key = lower(trim(text.substr(1, eq - 1)));
      const std::string_view value = trim(text.substr(eq + 1));
      if (key == "mu") {
        auto v = to_double(value);
        if (!v) throw ParseError(line_no, "invalid mu");
        raw.mu = v;
      } else if (key == "radius") {
        auto v = to_double(value);
        if (!v) throw ParseError(line_no, "invalid radius");
        raw.radius = v;
      } else if (key == "normalized") {
        if (!raw.records.empty()) throw ParseError(line_no, "#normalized must precede coefficient lines");
        raw.normalized = parse_bool(value, line_no);
        normalized_seen = true;
      } else if (key == "name") {
        raw.name = std::string(value);
      } else if (key == "rotation_rate") {
        auto v = to_double(value);
        if (!v) throw ParseError(line_no, "invalid rotation_rate");
        raw.rotation_rate = *v;
      }
      continue;
    }
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      cells.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() == 4 && lower(trim(cells[0])) == "n" && raw.records.empty()) continue;
    if (cells.size() != 4) throw ParseError(line_no, "expected n,m,C,S");
    auto n = to_int(cells[0]);
    auto m = to_int(cells[1]);
    auto c = to_double(cells[2]);
    auto s = to_double(cells[3]);
    if (!n || !m || !c || !s) throw ParseError(line_no, "malformed coefficient line");
    add_record(raw, line_no, *n, *m, *c, *s);
  }
  if (!normalized_seen) throw MetadataError("csv field lacks #normalized= metadata");
  return assemble(std::move(raw), std::move(name));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string format_general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FieldFormat parse_field_format(std::string_view name) {
  const std::string s = lower(name);
  if (s == "icgem" || s == "gfc") return FieldFormat::icgem;
  if (s == "csv") return FieldFormat::csv;
  throw std::invalid_argument("unknown field format '" + std::string(name) + "'");
}

std::string_view to_string(FieldFormat format) { return format == FieldFormat::icgem ? "icgem" : "csv"; }

double normalization_factor(int n, int m) {
  if (n < 0 || m < 0 || m > n) throw DomainError("normalization_factor: need 0 <= m <= n");
  const double base = (m == 0 ? 1.0 : 2.0) * (2.0 * n + 1.0);
  if (m == 0) return std::sqrt(base);
  const double log_ratio = std::lgamma(n - m + 1.0) - std::lgamma(n + m + 1.0);
  const double log_factor = 0.5 * (std::log(base) + log_ratio);
  if (log_factor < -706.0 || log_factor > 709.0)
    throw OverflowError("normalization factor for (" + std::to_string(n) + ", " + std::to_string(m) +
                        ") is not representable");
  // Incremental ratio is more accurate than exp(lgamma) once it is known to fit.
  double ratio = 1.0;
  for (int k = n - m + 1; k <= n + m; ++k) ratio /= k;
  const double value = std::sqrt(base * ratio);
  if (!std::isnormal(value)) throw OverflowError("normalization factor underflow");
  return value;
}

CoefficientRecord unnormalize(const CoefficientRecord& rec) {
  if (!rec.normalized) return rec;
  const double k = normalization_factor(rec.degree, rec.order);
  return {rec.degree, rec.order, rec.c * k, rec.s * k, false};
}

CoefficientRecord normalize(const CoefficientRecord& rec) {
  if (rec.normalized) return rec;
  const double k = normalization_factor(rec.degree, rec.order);
  return {rec.degree, rec.order, rec.c / k, rec.s / k, true};
}

GravityField::GravityField(std::string name, double mu, double reference_radius, std::vector<double> zonals,
                           double rotation_rate, std::vector<CoefficientRecord> tesserals, bool source_normalized)
    : name_(std::move(name)),
      mu_(mu),
      radius_(reference_radius),
      rotation_rate_(rotation_rate),
      zonals_(std::move(zonals)),
      tesserals_(std::move(tesserals)),
      source_normalized_(source_normalized) {
  if (!(mu_ > 0.0) || !std::isfinite(mu_)) throw DomainError("GravityField: mu must be positive");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw DomainError("GravityField: radius must be positive");
  if (zonals_.size() < 3) zonals_.resize(3, 0.0);
  zonals_[0] = 1.0;
  for (double c : zonals_)
    if (!std::isfinite(c)) throw DomainError("GravityField: non-finite zonal coefficient");
}

GravityField GravityField::kepler(double mu, double reference_radius, int n_max) {
  std::vector<double> z(static_cast<std::size_t>(std::max(n_max, 2)) + 1, 0.0);
  return GravityField("kepler", mu, reference_radius, std::move(z));
}

double GravityField::zonal(int n) const {
  if (n < 0 || n > n_max()) throw std::out_of_range("zonal degree " + std::to_string(n) + " outside 0.." +
                                                    std::to_string(n_max()));
  return zonals_[static_cast<std::size_t>(n)];
}

GravityField GravityField::truncated(int n_max) const {
  if (n_max < 2 || n_max > this->n_max())
    throw DomainError("truncation degree " + std::to_string(n_max) + " outside 2.." + std::to_string(this->n_max()));
  std::vector<double> z(zonals_.begin(), zonals_.begin() + n_max + 1);
  std::vector<CoefficientRecord> t;
  for (const auto& rec : tesserals_)
    if (rec.degree <= n_max) t.push_back(rec);
  return GravityField(name_, mu_, radius_, std::move(z), rotation_rate_, std::move(t), source_normalized_);
}

GravityField GravityField::with_degrees_disabled(const std::vector<int>& degrees) const {
  std::vector<double> z = zonals_;
  for (int n : degrees) {
    if (n < 2 || n > n_max()) throw DomainError("cannot disable degree " + std::to_string(n));
    z[static_cast<std::size_t>(n)] = 0.0;
  }
  return GravityField(name_, mu_, radius_, std::move(z), rotation_rate_, tesserals_, source_normalized_);
}

GravityField parse_field(std::istream& in, FieldFormat format, std::string name) {
  return format == FieldFormat::icgem ? parse_icgem(in, std::move(name)) : parse_csv(in, std::move(name));
}

GravityField load_field(const std::filesystem::path& path, std::optional<FieldFormat> format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open field file " + path.string());
  if (!format) {
    const std::string ext = lower(path.extension().string());
    format = ext == ".csv" ? FieldFormat::csv : FieldFormat::icgem;
  }
  return parse_field(in, *format, {});
}

void write_field(std::ostream& out, const GravityField& field, FieldFormat format) {
  const bool norm = field.source_normalized();
  std::vector<CoefficientRecord> records;
  for (int n = 0; n <= field.n_max(); ++n) {
    CoefficientRecord rec{n, 0, field.zonal(n), 0.0, false};
    records.push_back(norm ? normalize(rec) : rec);
  }
  for (const auto& rec : field.tesserals()) records.push_back(norm ? normalize(rec) : unnormalize(rec));
  std::stable_sort(records.begin(), records.end(), [](const auto& x, const auto& y) {
    return std::pair(x.degree, x.order) < std::pair(y.degree, y.order);
  });

  if (format == FieldFormat::icgem) {
    out << "begin_of_head\n"
        << "product_type              gravity_field\n"
        << "modelname                 " << (field.name().empty() ? "unnamed" : field.name()) << '\n'
        << "earth_gravity_constant    " << format_double(field.mu() * 1e9) << '\n'
        << "radius                    " << format_double(field.reference_radius() * 1e3) << '\n'
        << "max_degree                " << field.n_max() << '\n'
        << "norm                      " << (norm ? "fully_normalized" : "unnormalized") << '\n'
        << "end_of_head\n";
    for (const auto& r : records)
      out << "gfc " << r.degree << ' ' << r.order << ' ' << format_double(r.c) << ' ' << format_double(r.s) << '\n';
  } else {
    out << "#name=" << field.name() << '\n'
        << "#mu=" << format_general(field.mu()) << '\n'
        << "#radius=" << format_general(field.reference_radius()) << '\n'
        << "#rotation_rate=" << format_general(field.rotation_rate()) << '\n'
        << "#normalized=" << (norm ? "true" : "false") << '\n';
    for (const auto& r : records)
      out << r.degree << ',' << r.order << ',' << format_general(r.c) << ',' << format_general(r.s) << '\n';
  }
}

std::filesystem::path default_field_path() {
  if (const char* env = std::getenv("ZONAL_FIELD"); env != nullptr && *env != '\0') return env;
  return ZONAL_DEFAULT_FIELD;
}

}  // namespace zonal
