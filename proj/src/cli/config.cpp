#include "parlogue/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "parlogue/common/text.hpp"
#include "parlogue/compilesvc/socket.hpp"

namespace parlogue::cli {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"server.host", "PARLOGUE_HOST", "127.0.0.1", "address the HTTP service binds"},
      {"server.port", "PARLOGUE_PORT", "8080", "HTTP port, 0 picks a free one"},
      {"server.ui_dir", "PARLOGUE_UI_DIR", "", "static UI bundle served at /"},
      {"engine.data_dir", "PARLOGUE_DATA_DIR", "data", "session journals, one subdirectory per session"},
      {"engine.asset_dir", "PARLOGUE_ASSET_DIR", PARLOGUE_DEFAULT_ASSET_DIR, "prompt templates"},
      {"engine.fixtures_dir", "PARLOGUE_FIXTURES_DIR", PARLOGUE_DEFAULT_FIXTURES_DIR, "scripted session fixtures"},
      {"compiler.mode", "PARLOGUE_COMPILER_MODE", "in_process", "in_process or remote"},
      {"compiler.addr", "PARLOGUE_COMPILER_ADDR", "127.0.0.1:7070", "worker address for remote mode"},
      {"compiler.timeout_ms", "PARLOGUE_COMPILER_TIMEOUT_MS", "5000", "per-request worker timeout"},
      {"session.final_prompt_variant", "PARLOGUE_FINAL_PROMPT_VARIANT", "strict", "strict or flexible"},
      {"session.max_retries", "PARLOGUE_MAX_RETRIES", "2", "extra attempts after a malformed agent reply"},
      {"session.max_review_rounds", "PARLOGUE_MAX_REVIEW_ROUNDS", "2", "optimization agent rounds"},
      {"session.review", "PARLOGUE_REVIEW", "true", "run the optimization agent before compiling"},
      {"session.agent_timeout_ms", "PARLOGUE_AGENT_TIMEOUT_MS", "60000", "timeout of one agent call"},
      {"session.seed", "PARLOGUE_SEED", "0", "evaluation seed for new sessions"},
  };
  return keys;
}

namespace {

const ConfigKey* find_key(std::string_view key) {
  for (const auto& k : config_keys()) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string unquote(std::string_view v, std::size_t line) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        char n = v[++i];
        out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
      } else {
        out += v[i];
      }
    }
    return out;
  }
  if (!v.empty() && v.front() == '"') throw ConfigError("line " + std::to_string(line) + ": unterminated string");
  return std::string(v);
}

// Strips a trailing comment outside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

}  // namespace

Config::Config() {
  for (const auto& k : config_keys()) values_[std::string(k.key)] = std::string(k.fallback);
}

void Config::set(std::string_view key, std::string value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  it->second = std::move(value);
}

const std::string& Config::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + std::string(key) + "'");
  return it->second;
}

int Config::get_int(std::string_view key) const {
  const auto& v = get(key);
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + v + "'");
  }
  return out;
}

bool Config::get_bool(std::string_view key) const {
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + v + "'");
}

void merge_config_text(Config& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string body(trim(strip_comment(raw)));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("line " + std::to_string(line) + ": bad section header");
      section = std::string(trim(std::string_view(body).substr(1, body.size() - 2)));
      continue;
    }
    auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    std::string key(trim(std::string_view(body).substr(0, eq)));
    std::string value = unquote(trim(std::string_view(body).substr(eq + 1)), line);
    if (!section.empty()) key = section + "." + key;
    if (!find_key(key)) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    config.set(key, std::move(value));
  }
}

void merge_config_file(Config& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  merge_config_text(config, ss.str());
}

void merge_env(Config& config, const EnvLookup& lookup) {
  for (const auto& k : config_keys()) {
    if (const char* v = lookup(std::string(k.env).c_str()); v && *v) config.set(k.key, v);
  }
}

pipeline::EngineConfig engine_config(const Config& c) {
  pipeline::EngineConfig e;
  e.data_dir = c.get("engine.data_dir");
  e.asset_dir = c.get("engine.asset_dir");
  e.fixtures_dir = c.get("engine.fixtures_dir");
  try {
    e.compiler.mode = compilesvc::compile_mode_from_string(c.get("compiler.mode"));
    auto [host, port] = compilesvc::parse_host_port(c.get("compiler.addr"));
    e.compiler.host = host;
    e.compiler.port = port;
    e.defaults.final_variant = agents::final_variant_from_string(c.get("session.final_prompt_variant"));
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  e.compiler.timeout = std::chrono::milliseconds(c.get_int("compiler.timeout_ms"));
  e.defaults.max_retries = c.get_int("session.max_retries");
  e.defaults.max_review_rounds = c.get_int("session.max_review_rounds");
  e.defaults.review = c.get_bool("session.review");
  e.defaults.agent_timeout = std::chrono::milliseconds(c.get_int("session.agent_timeout_ms"));
  const auto& seed = c.get("session.seed");
  std::uint64_t s = 0;
  auto [p, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), s);
  if (ec != std::errc() || p != seed.data() + seed.size()) throw ConfigError("session.seed: expected an integer");
  e.defaults.seed = s;
  if (e.defaults.max_retries < 0 || e.defaults.max_review_rounds < 1) {
    throw ConfigError("session.max_retries must be >= 0 and session.max_review_rounds >= 1");
  }
  e.defaults.asset_dir = e.asset_dir;
  return e;
}

service::ServiceConfig service_config(const Config& c) {
  service::ServiceConfig s;
  s.host = c.get("server.host");
  s.port = c.get_int("server.port");
  if (s.port < 0 || s.port > 65535) throw ConfigError("server.port out of range");
  s.ui_dir = c.get("server.ui_dir");
  return s;
}

}  // namespace parlogue::cli
