#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zonal {

enum class FieldFormat { icgem, csv };

FieldFormat parse_field_format(std::string_view name);
std::string_view to_string(FieldFormat format);

/// One harmonic coefficient pair as it appears in a file.
struct CoefficientRecord {
  int degree = 0;
  int order = 0;
  double c = 0.0;
  double s = 0.0;
  bool normalized = false;

  friend bool operator==(const CoefficientRecord&, const CoefficientRecord&) = default;
};

/// sqrt((2 - delta_0m)(2n + 1)(n - m)!/(n + m)!), evaluated through lgamma.
/// Throws OverflowError when the result is not a finite normal double.
double normalization_factor(int n, int m);

/// Converts a fully normalized record to the unnormalized convention.
/// Records already unnormalized are returned unchanged.
CoefficientRecord unnormalize(const CoefficientRecord& rec);

/// Inverse of unnormalize.
CoefficientRecord normalize(const CoefficientRecord& rec);

/**
 * Central-body constants plus the unnormalized zonal table C_{n,0}.
 *
 * zonal(n) is defined for 0 <= n <= n_max with C_{0,0} = 1 and C_{1,0} = 0;
 * degrees missing from the source are stored as exact zeros. Tesseral
 * records are kept in the convention they were read in and are not used by
 * the zonal machinery. Instances are immutable.
 */
class GravityField {
 public:
  GravityField(std::string name, double mu, double reference_radius, std::vector<double> zonals,
               double rotation_rate = 0.0, std::vector<CoefficientRecord> tesserals = {},
               bool source_normalized = false);

  /// Field with all zonals set to zero (pure Kepler problem).
  static GravityField kepler(double mu, double reference_radius, int n_max = 2);

  const std::string& name() const noexcept { return name_; }
  double mu() const noexcept { return mu_; }
  double reference_radius() const noexcept { return radius_; }
  double rotation_rate() const noexcept { return rotation_rate_; }
  int n_max() const noexcept { return static_cast<int>(zonals_.size()) - 1; }
  bool source_normalized() const noexcept { return source_normalized_; }

  /// Unnormalized C_{n,0}; throws std::out_of_range outside 0..n_max.
  double zonal(int n) const;
  const std::vector<double>& zonals() const noexcept { return zonals_; }
  const std::vector<CoefficientRecord>& tesserals() const noexcept { return tesserals_; }

  /// Copy restricted to degrees 0..n_max.
  GravityField truncated(int n_max) const;

  /// Copy with C_{n,0} replaced by zero for every listed degree.
  GravityField with_degrees_disabled(const std::vector<int>& degrees) const;

 private:
  std::string name_;
  double mu_;
  double radius_;
  double rotation_rate_;
  std::vector<double> zonals_;
  std::vector<CoefficientRecord> tesserals_;
  bool source_normalized_;
};

GravityField parse_field(std::istream& in, FieldFormat format, std::string name = {});
GravityField load_field(const std::filesystem::path& path, std::optional<FieldFormat> format = std::nullopt);

/// Writes the field back in either format. CSV metadata uses km units, ICGEM uses SI.
/// Coefficients are written in the normalization they were read in.
void write_field(std::ostream& out, const GravityField& field, FieldFormat format);

/// Default location of the bundled lunar field, honouring ZONAL_FIELD.
std::filesystem::path default_field_path();

}  // namespace zonal
