#include "app.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "zonal/bench.hpp"
#include "zonal/dynamics.hpp"
#include "zonal/errors.hpp"
#include "zonal/gravity_field.hpp"
#include "zonal/json_io.hpp"
#include "zonal/kaula.hpp"
#include "zonal/svg_plot.hpp"
#include "zonal/verify.hpp"

namespace zonal::cli {

namespace {

using nlohmann::json;

constexpr double deg = std::numbers::pi / 180.0;

/// Thrown for bad combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void configure_logging(int verbose) {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_logger_mt("zonal");
    l->set_pattern("[%H:%M:%S.%e] %v");
    return l;
  }();
  logger->set_level(verbose >= 2 ? spdlog::level::debug : verbose == 1 ? spdlog::level::info : spdlog::level::warn);
  spdlog::set_default_logger(logger);
}

std::vector<int> parse_degrees(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(std::stoi(item));
      continue;
    }
    const auto colon2 = item.find(':', colon + 1);
    const int lo = std::stoi(item.substr(0, colon));
    const int hi = std::stoi(item.substr(colon + 1, colon2 == std::string::npos ? std::string::npos : colon2 - colon - 1));
    const int step = colon2 == std::string::npos ? 1 : std::stoi(item.substr(colon2 + 1));
    if (step <= 0 || hi < lo) throw UsageError("bad degree range '" + item + "'");
    for (int d = lo; d <= hi; d += step) out.push_back(d);
  }
  if (out.empty()) throw UsageError("empty degree list");
  return out;
}

std::shared_ptr<const GravityField> load(const CliConfig& c) {
  std::string path = c.field_path;
  if (path.empty()) {
    const char* env = std::getenv("ZONAL_FIELD");
    path = env && *env ? env : default_field_path().string();
  }
  std::optional<FieldFormat> format;
  if (!c.format.empty()) format = parse_field_format(c.format);
  auto field = std::make_shared<const GravityField>(load_field(path, format));
  spdlog::info("field {} from {} (n_max {})", field->name(), path, field->n_max());
  if (c.n_max > field->n_max()) throw UsageError(fmt::format("--nmax {} exceeds the field n_max {}", c.n_max, field->n_max()));
  return field;
}

PhaseMapSpec make_spec(const CliConfig& c, std::shared_ptr<const GravityField> field) {
  if (!c.sma && !c.altitude) throw UsageError("one of --sma or --alt is required");
  if (!c.inclination_deg) throw UsageError("--inc is required");
  PhaseMapSpec spec;
  spec.a = c.sma ? *c.sma : field->reference_radius() + *c.altitude;
  spec.inclination_circular = *c.inclination_deg * deg;
  spec.model = MeanModelSpec::defaults(field, c.n_max);
  if (c.j2sq) spec.model.include_j2sq = *c.j2sq;
  spec.model.include_centering = c.centering;
  spec.model.disabled_degrees = c.disabled;
  spec.chart = parse_grid_chart(c.chart);
  spec.resolution = c.grid;
  spec.e_max = c.e_max;
  spec.threads = c.threads;
  spec.validate();
  return spec;
}

/// Writes to --out or the given stream.
void emit(const CliConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw UsageError("cannot write " + c.out);
  file << text;
  spdlog::info("wrote {} ({} bytes)", c.out, text.size());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void add_field_options(CLI::App* cmd, CliConfig& c) {
  cmd->add_option("--field", c.field_path, "Gravity field file (default $ZONAL_FIELD or the bundled field)");
  cmd->add_option("--format", c.format, "Field file format")->check(CLI::IsMember({"icgem", "csv"}));
  cmd->add_option("--nmax", c.n_max, "Truncation degree")->check(CLI::Range(2, 1000));
  cmd->add_option("--out", c.out, "Output file (default stdout)");
  cmd->add_flag("-v,--verbose", c.verbose, "Log progress to stderr (repeat for more)");
}

void add_model_options(CLI::App* cmd, CliConfig& c) {
  add_field_options(cmd, c);
  auto* sma = cmd->add_option("--sma", c.sma, "Semi-major axis (km)")->check(CLI::PositiveNumber);
  auto* alt = cmd->add_option("--alt", c.altitude, "Altitude above the reference radius (km)");
  sma->excludes(alt);
  alt->excludes(sma);
  cmd->add_option("--inc", c.inclination_deg, "Inclination of the circular orbit (deg)")->check(CLI::Range(0.0, 180.0));
  cmd->add_flag("--j2sq,!--no-j2sq", c.j2sq, "Include the second-order J2 terms (default: by field)");
  cmd->add_flag("--centering", c.centering, "Include the elimination centering term");
  cmd->add_option("--disable", c.disabled, "Degrees to switch off")->delimiter(',');
  cmd->add_option("--grid", c.grid, "Phase-map resolution per axis")->check(CLI::Range(8, 2048));
  cmd->add_option("--chart", c.chart, "Grid chart")->check(CLI::IsMember({"polar", "cartesian"}));
  cmd->add_option("--emax", c.e_max, "Outer eccentricity (default from the impact boundary)");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
}

int cmd_field(const CliConfig& c, std::ostream& out) {
  auto field = load(c);
  const int n = c.n_max > 0 ? c.n_max : field->n_max();
  if (c.emit == "json") {
    json j = field_summary(field->name(), *field);
    json zonals = json::array();
    for (int i = 0; i <= n; ++i) zonals.push_back(field->zonal(i));
    j["zonals"] = std::move(zonals);
    j["prefers_j2sq"] = prefers_j2sq(*field);
    emit(c, out, dump(j));
    return exit_ok;
  }
  std::string text = fmt::format("name      {}\nmu        {} km^3/s^2\nradius    {} km\nn_max     {}\nj2sq      {}\n",
                                 field->name(), format_g17(field->mu()), format_g17(field->reference_radius()),
                                 field->n_max(), prefers_j2sq(*field) ? "on" : "off");
  for (int i = 2; i <= n; ++i) text += fmt::format("C{:<3}  {:>24}\n", i, format_g17(field->zonal(i)));
  emit(c, out, text);
  return exit_ok;
}

int cmd_verify(const CliConfig& c, const VerifyOptions& options, std::ostream& out) {
  auto field = load(c);
  const VerifyReport report = run_verification(*field, options);
  emit(c, out, c.emit == "json" ? dump(json(report)) : format_report(report));
  for (const CheckResult& r : report.checks)
    spdlog::info("{} {} {:.3e}", r.passed ? "ok" : "failed", r.name, r.metric);
  return report.passed() ? exit_ok : exit_verification_failed;
}

int cmd_series(const CliConfig& c, std::ostream& out) {
  auto field = load(c);
  const int n = c.n_max > 0 ? c.n_max : field->n_max();
  const AveragedSeries series = build_mean_series(*field, n);
  json j = json(series);
  emit(c, out, dump(j));
  return exit_ok;
}

std::string render(const CliConfig& c, const PhaseMap& map) {
  if (c.emit == "csv") return phase_map_csv(map);
  if (c.emit == "svg") return render_svg(map);
  return dump(json(map));
}

int cmd_phasemap(const CliConfig& c, const std::string& from, bool skip_frozen, std::ostream& out) {
  if (!from.empty()) {
    std::ifstream in(from);
    if (!in) throw UsageError("cannot read " + from);
    PhaseMap map;
    try {
      map = json::parse(in).get<PhaseMap>();
    } catch (const json::exception& ex) {
      throw UsageError(from + ": " + ex.what());
    }
    emit(c, out, render(c, map));
    return exit_ok;
  }
  const PhaseMapSpec spec = make_spec(c, load(c));
  const ReducedHamiltonian k(spec);
  PhaseMap map = phase_map(spec, k);
  spdlog::info("map {}x{} e_max {:.4f} e_impact {:.4f}", map.resolution, map.resolution, map.e_max, map.e_impact);
  if (!skip_frozen) map.frozen = find_frozen(k, map.e_max, map.k_scale());
  emit(c, out, render(c, map));
  return exit_ok;
}

int cmd_frozen(const CliConfig& c, std::ostream& out) {
  const PhaseMapSpec spec = make_spec(c, load(c));
  const std::vector<FrozenOrbit> orbits = find_frozen(spec);
  if (c.emit == "json") {
    emit(c, out, dump(json(orbits)));
  } else if (c.emit == "csv") {
    emit(c, out, frozen_csv(orbits));
  } else {
    std::string text = fmt::format("{:>12} {:>10}  {:<10} {}\n", "e", "omega_deg", "class", "impact");
    for (const FrozenOrbit& o : orbits)
      text += fmt::format("{:>12.6f} {:>10.3f}  {:<10} {}\n", o.e, std::round(o.omega / deg * 1e3) / 1e3 + 0.0, to_string(o.stability),
                          o.impact ? "yes" : "no");
    const auto free = std::count_if(orbits.begin(), orbits.end(), [](const FrozenOrbit& o) { return !o.impact; });
    text += fmt::format("{} stationary points, {} non-impact\n", orbits.size(), free);
    emit(c, out, text);
  }
  return exit_ok;
}

struct BenchArgs {
  std::string degrees = "2:30";
  std::vector<std::string> methods{"kaula", "brute_force"};
  int repetitions = 5;
  int eval_degree = 0;
  int eval_points = 200;
  bool parallel = false;
};

int cmd_bench(const CliConfig& c, const BenchArgs& b, std::ostream& out) {
  auto field = load(c);
  std::vector<int> degrees = parse_degrees(b.degrees);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  std::vector<BenchMethod> methods;
  for (const std::string& m : b.methods) methods.push_back(parse_bench_method(m));
  BenchOptions options;
  options.repetitions = b.repetitions;
  options.parallel = b.parallel;
  std::vector<BenchRecord> records = bench_construction(*field, degrees, methods, options);
  if (b.eval_degree > 0) {
    auto [kaula, brute] = bench_evaluation(*field, b.eval_degree, b.eval_points, options);
    records.push_back(kaula);
    records.push_back(brute);
  }
  for (BenchMethod m : methods)
    if (degrees.size() >= 2)
      spdlog::info("{} construction slope {:.3f}", to_string(m), loglog_slope(records, m, degrees.front(), degrees.back()));
  emit(c, out, c.emit == "json" ? dump(json(records)) : bench_csv(records));
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Averaged zonal Hamiltonian: verification, phase maps, frozen orbits, benchmarks", "zonal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "zonal 0.1.0");

  CliConfig c;
  VerifyOptions verify;
  BenchArgs bench;
  std::string from;
  bool skip_frozen = false;

  auto* field = app.add_subcommand("field", "Print the zonal coefficients of a field");
  add_field_options(field, c);
  field->add_option("--emit", c.emit)->check(CLI::IsMember({"text", "json"}));

  auto* ver = app.add_subcommand("verify", "Run the oracle suite; exit 1 on any failed tolerance");
  add_field_options(ver, c);
  ver->add_option("--states", verify.states, "Random states per check")->check(CLI::PositiveNumber);
  ver->add_option("--seed", verify.seed);
  ver->add_option("--emit", c.emit)->check(CLI::IsMember({"text", "json"}));

  auto* series = app.add_subcommand("series", "Mean-series operations");
  auto* series_dump = series->add_subcommand("dump", "Write the averaged term list as JSON");
  series->require_subcommand(1);
  add_field_options(series_dump, c);

  auto* pm = app.add_subcommand("phasemap", "Evaluate the reduced Hamiltonian on an eccentricity-vector grid");
  add_model_options(pm, c);
  pm->add_option("--emit", c.emit)->check(CLI::IsMember({"json", "csv", "svg"}));
  pm->add_option("--from", from, "Re-render a PhaseMap JSON file instead of computing");
  pm->add_flag("--no-frozen", skip_frozen, "Skip the frozen-orbit search");

  auto* fr = app.add_subcommand("frozen", "List frozen orbits sorted by eccentricity");
  add_model_options(fr, c);
  fr->add_option("--emit", c.emit)->check(CLI::IsMember({"text", "json", "csv"}));

  auto* be = app.add_subcommand("bench", "Construction and evaluation timings as CSV");
  add_field_options(be, c);
  be->add_option("--degrees", bench.degrees, "List or lo:hi[:step] ranges, comma separated");
  be->add_option("--methods", bench.methods)->delimiter(',')->check(CLI::IsMember({"kaula", "brute_force"}));
  be->add_option("--reps", bench.repetitions)->check(CLI::Range(1, 1000));
  be->add_option("--eval-degree", bench.eval_degree, "Also time evaluation up to this degree");
  be->add_option("--eval-points", bench.eval_points)->check(CLI::NonNegativeNumber);
  be->add_flag("--parallel", bench.parallel, "Throughput mode (not for scaling claims)");
  be->add_option("--emit", c.emit)->check(CLI::IsMember({"csv", "json"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }
  configure_logging(c.verbose);
  verify.n_max = c.n_max > 0 ? c.n_max : verify.n_max;

  try {
    if (*field) return cmd_field(c, out);
    if (*ver) return cmd_verify(c, verify, out);
    if (*series_dump) return cmd_series(c, out);
    if (*pm) return cmd_phasemap(c, from, skip_frozen, out);
    if (*fr) return cmd_frozen(c, out);
    if (*be) return cmd_bench(c, bench, out);
  } catch (const ParseError& e) {
    err << "zonal: parse error at line " << e.line() << ": " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "zonal: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace zonal::cli
