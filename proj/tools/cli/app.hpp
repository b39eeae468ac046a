#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace zonal::cli {

enum ExitCode : int { exit_ok = 0, exit_verification_failed = 1, exit_usage = 2 };

struct CliConfig {
  std::string field_path;  ///< empty: $ZONAL_FIELD, then the bundled field
  std::string format;      ///< icgem | csv; empty guesses from the extension
  int n_max = -1;          ///< -1: the whole field
  std::optional<double> sma;       ///< km
  std::optional<double> altitude;  ///< km above the reference radius
  std::optional<double> inclination_deg;
  int grid = 128;
  std::string chart = "polar";
  double e_max = 0;
  std::vector<int> disabled;
  std::string out;   ///< empty: stdout
  std::string emit;  ///< json | csv | svg | text, depending on the command
  std::optional<bool> j2sq;
  bool centering = false;
  unsigned threads = 0;
  int verbose = 0;
};

/// Runs the command line (args excludes the program name) and returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zonal::cli
