#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parlogue/pipeline/runner.hpp"
#include "parlogue/service/http_api.hpp"

namespace parlogue::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigKey {
  std::string_view key;   // "section.name"
  std::string_view env;   // overriding environment variable
  std::string_view fallback;
  std::string_view help;
};

/// Every recognised key, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Flat key/value settings. Layers, lowest first: defaults, config file,
/// environment, command line.
class Config {
 public:
  Config();  // defaults

  /// Throws ConfigError for an unknown key.
  void set(std::string_view key, std::string value);
  const std::string& get(std::string_view key) const;
  int get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& values() const { return values_; }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

/// TOML-style subset: `[section]` headers, `key = value` lines, `#`
/// comments, values bare or in double quotes. Throws ConfigError naming the
/// line.
void merge_config_text(Config& config, std::string_view text);
void merge_config_file(Config& config, const std::filesystem::path& path);

using EnvLookup = std::function<const char*(const char*)>;
/// Applies every set environment override.
void merge_env(Config& config, const EnvLookup& lookup);

/// Throws ConfigError for malformed values.
pipeline::EngineConfig engine_config(const Config& config);
service::ServiceConfig service_config(const Config& config);

}  // namespace parlogue::cli
