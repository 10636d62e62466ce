#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigenshell/core/shell.hpp"
#include "eigenshell/core/spectrum.hpp"

namespace eigenshell {

/// Shortest round-trip decimal representation; "nan", "inf", "-inf" for
/// non-finite values.
std::string format_double(double value);

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Comma-separated table with '#'-prefixed metadata lines, one header row and
/// LF line endings. Cells are preformatted strings.
struct CsvTable {
  Metadata metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  void add_numeric_row(const std::vector<double>& values);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
};

/// Columns: delta_E (or the curve's parameter), f, population, empty.
CsvTable ratio_curve_table(const RatioCurve& curve);

/// Lowercase hex SHA-256 of `text`.
std::string sha256_hex(std::string_view text);

/// Content-addressed store of eigenpairs. File layout, all little-endian:
///   bytes 0..7   magic "ESPECv1\0"
///   uint64       scalar kind (0 = real64, 1 = complex128 as re,im pairs)
///   uint64       energy count n
///   uint64       state rows r
///   uint64       state cols c (0 when vectors were not stored)
///   float64[n]   energies
///   scalar[r*c]  states, row-major
/// Files are written to a temporary name and renamed into place.
class SpectrumCache {
 public:
  explicit SpectrumCache(std::filesystem::path root);

  /// Root from EIGENSHELL_CACHE, else ./.eigenshell-cache.
  static SpectrumCache from_environment();

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path_for(const std::string& key) const;

  /// Empty on a miss. A corrupt file is reported through `warning` and
  /// treated as a miss.
  std::optional<RealSpectrum> load_real(const std::string& key, std::string* warning = nullptr) const;
  std::optional<ComplexSpectrum> load_complex(const std::string& key,
                                              std::string* warning = nullptr) const;

  void store(const std::string& key, const RealSpectrum& spectrum) const;
  void store(const std::string& key, const ComplexSpectrum& spectrum) const;

 private:
  std::filesystem::path root_;
};

/// Cache key for a canonical parameter string such as
/// "coupled-top;j=60;mu=0.5;window=-1,-0.8".
std::string cache_key(std::string_view canonical_parameters);

}  // namespace eigenshell
