#pragma once

#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "zonal/bench.hpp"
#include "zonal/dynamics.hpp"
#include "zonal/gravity_field.hpp"
#include "zonal/hamiltonian.hpp"

namespace httplib {
class Server;
}

namespace zonal::service {

struct Reply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Immutable after construction; ids are file stems.
class FieldCatalog {
 public:
  FieldCatalog() = default;

  /// Loads every *.gfc, *.icgem and *.csv file; unreadable files are skipped with a warning.
  static FieldCatalog from_directory(const std::filesystem::path& dir);

  void add(const std::string& id, GravityField field);
  std::shared_ptr<const GravityField> find(const std::string& id) const;
  const std::map<std::string, std::shared_ptr<const GravityField>>& entries() const noexcept { return fields_; }
  bool empty() const noexcept { return fields_.empty(); }

 private:
  std::map<std::string, std::shared_ptr<const GravityField>> fields_;
};

/// LRU map from (field, degree set, flags) to a built mean Hamiltonian.
class ModelCache {
 public:
  explicit ModelCache(std::size_t capacity = 64) : capacity_(capacity) {}

  std::shared_ptr<const MeanHamiltonian> get(const std::string& field_id, const MeanModelSpec& spec);
  std::size_t size() const;
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t hits() const;

  static std::string key(const std::string& field_id, const MeanModelSpec& spec);

 private:
  using Entry = std::pair<std::string, std::shared_ptr<const MeanHamiltonian>>;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<Entry> order_;  ///< most recent first
  std::unordered_map<std::string, std::list<Entry>::iterator> index_;
  std::size_t hits_ = 0;
};

/// A validated request; the spec's model points into the catalog.
struct ParsedRequest {
  std::string field_id;
  PhaseMapSpec spec;
  std::vector<int> degrees;  ///< ramp only
};

struct ServiceOptions {
  std::filesystem::path bench_cache;  ///< JSON file with the last benchmark run; empty disables it
  unsigned threads = 0;               ///< per-request grid threads
};

class Service {
 public:
  Service(FieldCatalog catalog, ServiceOptions options = {});

  Reply fields() const;
  Reply phasemap(const std::string& body);
  Reply frozen(const std::string& body);

  /// Validates a ramp body: the error reply, or the plan to stream.
  std::variant<Reply, ParsedRequest> prepare_ramp(const std::string& body) const;
  /// One NDJSON line per degree. Stops early when sink returns false.
  void stream_ramp(const ParsedRequest& plan, const std::function<bool(const std::string&)>& sink) const;
  /// prepare_ramp + stream_ramp collected into one body.
  Reply ramp(const std::string& body) const;

  /// Cached last run (this session, else the cache file); 404 when there is none.
  Reply bench() const;
  /// Runs a benchmark described by the body and caches it.
  Reply run_bench(const std::string& body);

  const FieldCatalog& catalog() const noexcept { return catalog_; }
  const ModelCache& cache() const noexcept { return cache_; }

 private:
  ParsedRequest parse(const std::string& body, bool ramp) const;

  FieldCatalog catalog_;
  ServiceOptions options_;
  ModelCache cache_;
  mutable std::mutex bench_mutex_;
  std::optional<std::string> bench_body_;
};

/// Routes: GET /fields, POST /phasemap, POST /frozen, POST /ramp, GET|POST /bench.
void mount(httplib::Server& server, Service& service);

}  // namespace zonal::service
