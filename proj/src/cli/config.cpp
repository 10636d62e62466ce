#include "eigenshell/cli/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace eigenshell::cli {
namespace {

double parse_double(const std::string& key, std::string text) {
  boost::algorithm::trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return v;
}

long parse_int(const std::string& key, std::string text) {
  boost::algorithm::trim(text);
  long v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::is_any_of(","));
  std::erase_if(parts, [](std::string& p) {
    boost::algorithm::trim(p);
    return p.empty();
  });
  return parts;
}

void from_tree(const boost::property_tree::ptree& tree, std::map<std::string, std::string>& values,
               std::string& name) {
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "top-level keys must live inside a [section]");
    for (const auto& [key, leaf] : body) {
      values[section + "." + key] = boost::algorithm::trim_copy(leaf.data());
    }
  }
  const auto it = values.find("experiment.name");
  if (it == values.end()) throw ConfigError("experiment.name", "missing");
  if (experiment_names().count(it->second) == 0) {
    throw ConfigError("experiment.name", "unknown experiment '" + it->second + "'");
  }
  name = it->second;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("<file>", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig config;
  from_tree(tree, config.values_, config.name_);
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_string(text.str());
}

std::string ExperimentConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

long ExperimentConfig::get_int(const std::string& key, long fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(key, it->second);
}

bool ExperimentConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto v = boost::algorithm::to_lower_copy(it->second);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected a boolean, got '" + it->second + "'");
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key,
                                                  const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& part : split_list(it->second)) out.push_back(parse_double(key, part));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<long> ExperimentConfig::get_ints(const std::string& key,
                                             const std::vector<long>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<long> out;
  for (const auto& part : split_list(it->second)) out.push_back(parse_int(key, part));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

void ExperimentConfig::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (key == "experiment.name") continue;
    if (allowed.count(key) == 0) throw ConfigError(key, "unknown field for experiment '" + name_ + "'");
  }
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) out << key << '=' << value << '\n';
  return out.str();
}

}  // namespace eigenshell::cli
