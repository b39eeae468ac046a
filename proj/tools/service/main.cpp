#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>
#include <spdlog/spdlog.h>

#include "service.hpp"

namespace {
httplib::Server* running = nullptr;
void stop(int) {
  if (running) running->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"JSON-over-HTTP facade for phase maps, frozen orbits, ramps and benchmarks", "zonal-serve"};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string fields_dir = zonal::default_field_path().parent_path().string();
  std::string static_dir;
  zonal::service::ServiceOptions options;
  std::string bench_cache;
  bool verbose = false;
  app.add_option("--host", host, "Bind address (loopback by default)");
  app.add_option("--port", port)->check(CLI::Range(0, 65535));
  app.add_option("--fields-dir", fields_dir, "Directory of gravity field files")->check(CLI::ExistingDirectory);
  app.add_option("--static", static_dir, "Serve a static UI bundle from this directory")->check(CLI::ExistingDirectory);
  app.add_option("--bench-cache", bench_cache, "JSON file holding the last benchmark run");
  app.add_option("--threads", options.threads, "Grid threads per request (0 = all cores)");
  app.add_flag("-v,--verbose", verbose);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);
  options.bench_cache = bench_cache;

  try {
    zonal::service::Service service(zonal::service::FieldCatalog::from_directory(fields_dir), options);
    httplib::Server server;
    zonal::service::mount(server, service);
    if (!static_dir.empty()) server.set_mount_point("/", static_dir);
    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
    running = &server;
    std::signal(SIGINT, stop);
    std::signal(SIGTERM, stop);
    if (port == 0) port = server.bind_to_any_port(host);
    else if (!server.bind_to_port(host, port)) {
      std::cerr << "zonal-serve: cannot bind " << host << ':' << port << '\n';
      return 2;
    }
    std::cout << "listening on http://" << host << ':' << port << std::endl;
    server.listen_after_bind();
  } catch (const std::exception& e) {
    std::cerr << "zonal-serve: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
