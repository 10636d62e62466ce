#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenshell::cli {

/// Invalid or unknown configuration field. `field()` is "section.key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// INI-style experiment configuration:
///
///   [experiment]
///   name = billiard
///   [model]
///   k_c = 515
///
/// Values are looked up as "section.key". Lists are comma separated.
class ExperimentConfig {
 public:
  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_string(const std::string& text);

  const std::string& name() const { return name_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<long> get_ints(const std::string& key, const std::vector<long>& fallback) const;

  /// Throws ConfigError naming the first key outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

  /// "section.key=value" lines in key order, used for cache keys and output
  /// metadata.
  std::string canonical() const;

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

inline const std::set<std::string>& experiment_names() {
  static const std::set<std::string> names = {"billiard", "coupled-top", "top-volume",
                                              "kicked-rotor", "xxz"};
  return names;
}

}  // namespace eigenshell::cli
