#pragma once

#include <filesystem>
#include <memory>
#include <numbers>
#include <string>

#include "zonal/gravity_field.hpp"

namespace zonal::test {

inline constexpr double pi = std::numbers::pi;
inline constexpr double deg = pi / 180.0;

inline std::shared_ptr<const GravityField> moon() {
  static const auto field = std::make_shared<const GravityField>(load_field(default_field_path()));
  return field;
}

/// Fresh directory under the system temp dir, removed by the caller if needed.
std::filesystem::path scratch_dir(const std::string& tag);

/// Writes text to dir/name and returns the path.
std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name, const std::string& text);

}  // namespace zonal::test
