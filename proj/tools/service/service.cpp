#include "service.hpp"

#include <algorithm>
#include <fstream>
#include <numbers>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "zonal/errors.hpp"
#include "zonal/json_io.hpp"

namespace zonal::service {

namespace {

using nlohmann::json;

constexpr double deg = std::numbers::pi / 180.0;
constexpr int min_resolution = 16;
constexpr int max_resolution = 512;

struct HttpError : std::runtime_error {
  HttpError(int s, const std::string& what) : std::runtime_error(what), status(s) {}
  int status;
};

Reply error_reply(int status, const std::string& message) {
  return Reply{status, "application/json", json{{"error", message}, {"status", status}}.dump() + "\n"};
}

Reply ok(const json& j) { return Reply{200, "application/json", j.dump() + "\n"}; }

json parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw HttpError(400, "body is not valid JSON");
  if (!j.is_object()) throw HttpError(400, "body must be a JSON object");
  return j;
}

double number(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw HttpError(400, std::string(key) + " must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw HttpError(400, std::string(key) + " must be an integer");
  return v.get<int>();
}

bool boolean(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_boolean()) throw HttpError(400, std::string(key) + " must be a boolean");
  return j[key].get<bool>();
}

std::vector<int> int_list(const json& j, const char* key) {
  std::vector<int> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw HttpError(400, std::string(key) + " must be an array");
  for (const json& v : j[key]) {
    if (!v.is_number_integer()) throw HttpError(400, std::string(key) + " entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

template <class F>
Reply guarded(F&& body) {
  try {
    return body();
  } catch (const HttpError& e) {
    return error_reply(e.status, e.what());
  } catch (const DomainError& e) {
    return error_reply(422, e.what());
  } catch (const std::exception& e) {
    spdlog::error("handler failed: {}", e.what());
    return error_reply(500, e.what());
  }
}

}  // namespace

FieldCatalog FieldCatalog::from_directory(const std::filesystem::path& dir) {
  FieldCatalog catalog;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string ext = path.extension().string();
    if (ext != ".gfc" && ext != ".icgem" && ext != ".csv") continue;
    try {
      catalog.add(path.stem().string(), load_field(path));
      spdlog::info("loaded field {} from {}", path.stem().string(), path.string());
    } catch (const std::exception& e) {
      spdlog::warn("skipping {}: {}", path.string(), e.what());
    }
  }
  return catalog;
}

void FieldCatalog::add(const std::string& id, GravityField field) {
  fields_[id] = std::make_shared<const GravityField>(std::move(field));
}

std::shared_ptr<const GravityField> FieldCatalog::find(const std::string& id) const {
  const auto it = fields_.find(id);
  return it == fields_.end() ? nullptr : it->second;
}

std::string ModelCache::key(const std::string& field_id, const MeanModelSpec& spec) {
  std::vector<int> off = spec.disabled_degrees;
  std::sort(off.begin(), off.end());
  off.erase(std::unique(off.begin(), off.end()), off.end());
  std::ostringstream k;
  k << field_id << '|' << spec.n_max << '|';
  for (int d : off) k << d << ',';
  k << '|' << spec.include_j2sq << spec.include_centering;
  return k.str();
}

std::shared_ptr<const MeanHamiltonian> ModelCache::get(const std::string& field_id, const MeanModelSpec& spec) {
  const std::string k = key(field_id, spec);
  {
    std::lock_guard lock(mutex_);
    if (auto it = index_.find(k); it != index_.end()) {
      order_.splice(order_.begin(), order_, it->second);
      ++hits_;
      return it->second->second;
    }
  }
  auto built = std::make_shared<const MeanHamiltonian>(spec);
  std::lock_guard lock(mutex_);
  if (auto it = index_.find(k); it != index_.end()) return it->second->second;
  order_.emplace_front(k, built);
  index_[k] = order_.begin();
  while (order_.size() > capacity_) {
    index_.erase(order_.back().first);
    order_.pop_back();
  }
  return built;
}

std::size_t ModelCache::size() const {
  std::lock_guard lock(mutex_);
  return order_.size();
}

std::size_t ModelCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

Service::Service(FieldCatalog catalog, ServiceOptions options)
    : catalog_(std::move(catalog)), options_(std::move(options)) {
  if (catalog_.empty()) throw DomainError("no gravity fields loaded");
}

ParsedRequest Service::parse(const std::string& body, bool ramp) const {
  const json j = parse_body(body);
  ParsedRequest r;
  if (j.contains("field")) {
    if (!j["field"].is_string()) throw HttpError(400, "field must be a string");
    r.field_id = j["field"].get<std::string>();
  } else {
    r.field_id = catalog_.entries().begin()->first;
  }
  auto field = catalog_.find(r.field_id);
  if (!field) throw HttpError(400, "unknown field '" + r.field_id + "'");

  const bool has_a = j.contains("a"), has_alt = j.contains("altitude");
  if (has_a == has_alt) throw HttpError(400, "exactly one of a and altitude is required");
  const double a = has_a ? number(j, "a") : field->reference_radius() + number(j, "altitude");
  if (!j.contains("inclination_deg")) throw HttpError(400, "inclination_deg is required");
  const double inc = number(j, "inclination_deg");
  if (inc < 0.0 || inc > 180.0) throw HttpError(400, "inclination_deg must lie in [0, 180]");

  const int n_max = j.contains("n_max") ? integer(j, "n_max") : field->n_max();
  if (n_max < 2 || n_max > field->n_max())
    throw HttpError(400, "n_max must lie in 2.." + std::to_string(field->n_max()));
  const std::vector<int> off = int_list(j, "disabled_degrees");
  for (int d : off)
    if (d < 2 || d > n_max) throw HttpError(400, "disabled degree " + std::to_string(d) + " out of range");

  PhaseMapSpec& spec = r.spec;
  spec.a = a;
  spec.inclination_circular = inc * deg;
  spec.model = MeanModelSpec::defaults(field, n_max);
  spec.model.include_j2sq = boolean(j, "j2sq", spec.model.include_j2sq);
  spec.model.include_centering = boolean(j, "centering", false);
  spec.model.disabled_degrees = off;
  if (spec.model.include_centering && !spec.model.include_j2sq) throw HttpError(400, "centering requires j2sq");
  spec.resolution = j.contains("resolution") ? integer(j, "resolution") : 128;
  if (spec.resolution < min_resolution || spec.resolution > max_resolution)
    throw HttpError(400, "resolution must lie in " + std::to_string(min_resolution) + ".." + std::to_string(max_resolution));
  if (j.contains("chart")) {
    if (!j["chart"].is_string()) throw HttpError(400, "chart must be a string");
    try {
      spec.chart = parse_grid_chart(j["chart"].get<std::string>());
    } catch (const std::exception& e) {
      throw HttpError(400, e.what());
    }
  }
  if (j.contains("e_max")) spec.e_max = number(j, "e_max");
  spec.threads = options_.threads;

  if (ramp) {
    r.degrees = int_list(j, "degrees");
    if (r.degrees.empty()) throw HttpError(400, "degrees must be a non-empty array");
    for (int d : r.degrees)
      if (d < 2 || d > field->n_max()) throw HttpError(400, "ramp degree " + std::to_string(d) + " out of range");
  }
  if (a <= field->reference_radius()) throw DomainError("a must exceed the reference radius");
  spec.validate();
  return r;
}

Reply Service::fields() const {
  json list = json::array();
  for (const auto& [id, field] : catalog_.entries()) list.push_back(field_summary(id, *field));
  return ok(json{{"fields", std::move(list)}});
}

Reply Service::phasemap(const std::string& body) {
  return guarded([&] {
    const ParsedRequest r = parse(body, false);
    const ReducedHamiltonian k(r.spec, cache_.get(r.field_id, r.spec.model));
    PhaseMap map = phase_map(r.spec, k);
    map.frozen = find_frozen(k, map.e_max, map.k_scale());
    json j = map;
    j["field"] = r.field_id;
    return ok(j);
  });
}

Reply Service::frozen(const std::string& body) {
  return guarded([&] {
    ParsedRequest r = parse(body, false);
    const ReducedHamiltonian k(r.spec, cache_.get(r.field_id, r.spec.model));
    PhaseMapSpec coarse = r.spec;
    coarse.resolution = 64;
    const double scale = phase_map(coarse, k).k_scale();
    const double e_max = r.spec.resolved_e_max();
    json j{{"field", r.field_id},
           {"a", r.spec.a},
           {"inclination_circular", r.spec.inclination_circular},
           {"e_max", e_max},
           {"e_impact", impact_eccentricity(r.spec.a, r.spec.model.field->reference_radius())},
           {"model", model_json(r.spec.model)},
           {"frozen", find_frozen(k, e_max, scale)}};
    return ok(j);
  });
}

std::variant<Reply, ParsedRequest> Service::prepare_ramp(const std::string& body) const {
  try {
    return parse(body, true);
  } catch (const HttpError& e) {
    return error_reply(e.status, e.what());
  } catch (const DomainError& e) {
    return error_reply(422, e.what());
  }
}

void Service::stream_ramp(const ParsedRequest& plan, const std::function<bool(const std::string&)>& sink) const {
  bool open = true;
  try {
    ramp_models(plan.spec, plan.degrees, [&](const RampFrame& f) {
      if (!open) return;
      json frame{{"degree", f.degree}, {"field", plan.field_id}, {"map", f.map}};
      open = sink(frame.dump() + "\n");
    });
  } catch (const std::exception& e) {
    if (open) sink(json{{"error", e.what()}}.dump() + "\n");
  }
}

Reply Service::ramp(const std::string& body) const {
  auto prepared = prepare_ramp(body);
  if (auto* reply = std::get_if<Reply>(&prepared)) return *reply;
  Reply r{200, "application/x-ndjson", {}};
  stream_ramp(std::get<ParsedRequest>(prepared), [&](const std::string& line) {
    r.body += line;
    return true;
  });
  return r;
}

Reply Service::bench() const {
  {
    std::lock_guard lock(bench_mutex_);
    if (bench_body_) return Reply{200, "application/json", *bench_body_};
  }
  if (!options_.bench_cache.empty() && std::filesystem::exists(options_.bench_cache)) {
    std::ifstream in(options_.bench_cache);
    const json records = json::parse(in, nullptr, false);
    if (!records.is_discarded() && records.is_array())
      return ok(json{{"source", "file"}, {"records", records}});
  }
  return error_reply(404, "no benchmark run cached");
}

Reply Service::run_bench(const std::string& body) {
  return guarded([&] {
    const json j = body.empty() ? json::object() : parse_body(body);
    const std::string id = j.value("field", catalog_.entries().begin()->first);
    auto field = catalog_.find(id);
    if (!field) throw HttpError(400, "unknown field '" + id + "'");
    std::vector<int> degrees = int_list(j, "degrees");
    if (degrees.empty())
      for (int d = 2; d <= std::min(20, field->n_max()); ++d) degrees.push_back(d);
    std::sort(degrees.begin(), degrees.end());
    for (int d : degrees)
      if (d < 2 || d > field->n_max()) throw HttpError(400, "bench degree " + std::to_string(d) + " out of range");
    std::vector<BenchMethod> methods{BenchMethod::kaula, BenchMethod::brute_force};
    if (j.contains("methods")) {
      methods.clear();
      for (const json& m : j["methods"]) {
        try {
          methods.push_back(parse_bench_method(m.get<std::string>()));
        } catch (const std::exception& e) {
          throw HttpError(400, e.what());
        }
      }
    }
    BenchOptions options;
    if (j.contains("repetitions")) options.repetitions = std::max(1, integer(j, "repetitions"));
    const std::vector<BenchRecord> records = bench_construction(*field, degrees, methods, options);
    const json list = records;
    if (!options_.bench_cache.empty()) std::ofstream(options_.bench_cache) << list.dump(2) << '\n';
    const std::string text = json{{"source", "session"}, {"records", list}}.dump() + "\n";
    std::lock_guard lock(bench_mutex_);
    bench_body_ = text;
    return Reply{200, "application/json", text};
  });
}

void mount(httplib::Server& server, Service& service) {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get("/fields", [&, send](const httplib::Request&, httplib::Response& res) { send(res, service.fields()); });
  server.Post("/phasemap",
              [&, send](const httplib::Request& req, httplib::Response& res) { send(res, service.phasemap(req.body)); });
  server.Post("/frozen",
              [&, send](const httplib::Request& req, httplib::Response& res) { send(res, service.frozen(req.body)); });
  server.Get("/bench", [&, send](const httplib::Request&, httplib::Response& res) { send(res, service.bench()); });
  server.Post("/bench",
              [&, send](const httplib::Request& req, httplib::Response& res) { send(res, service.run_bench(req.body)); });
  server.Post("/ramp", [&, send](const httplib::Request& req, httplib::Response& res) {
    auto prepared = service.prepare_ramp(req.body);
    if (auto* reply = std::get_if<Reply>(&prepared)) {
      send(res, *reply);
      return;
    }
    auto plan = std::make_shared<ParsedRequest>(std::get<ParsedRequest>(std::move(prepared)));
    res.set_chunked_content_provider("application/x-ndjson", [&service, plan](std::size_t, httplib::DataSink& sink) {
      service.stream_ramp(*plan, [&](const std::string& line) { return sink.write(line.data(), line.size()); });
      sink.done();
      return true;
    });
  });
}

}  // namespace zonal::service
