#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "parlogue/agents/envelope.hpp"
#include "parlogue/cli/mutate.hpp"
#include "parlogue/pipeline/session.hpp"

namespace parlogue::cli {

/// A known-good design: the reasoner's parameters, the coder's program and
/// the reviewer's repair (the clean candidate unless given).
struct AblationFixture {
  std::string name;
  std::string family;
  std::string intent;
  nlohmann::json params;  // reasoner parameter objects, verbatim
  agents::CaOutput candidate;
  agents::CaOutput repair;
};

/// {"name","family","intent","params","candidate","repair"?}; candidate and
/// repair use the coder envelope keys. Throws std::invalid_argument.
AblationFixture ablation_fixture_from_json(const nlohmann::json& j);
/// Every *.json in `dir`, sorted by fixture name.
std::vector<AblationFixture> load_ablation_fixtures(const std::filesystem::path& dir);

enum class ValidatorConfig { Off, On };
std::string_view to_string(ValidatorConfig c);  // "validator_off" | "validator_on"
/// "on" | "off" | "both". Throws std::invalid_argument.
std::vector<ValidatorConfig> validator_configs_from_string(std::string_view s);

struct AblationOptions {
  int mutations = 4;  // per fixture; 0 runs each fixture unmutated
  std::vector<ValidatorConfig> configs = {ValidatorConfig::Off, ValidatorConfig::On};
  std::uint64_t seed = 0;
  int max_review_rounds = 2;
  std::filesystem::path asset_dir = pipeline::default_asset_dir();
};

struct AblationRow {
  std::string fixture;
  int mutation = 0;
  std::string op;  // "none" for a clean run
  ValidatorConfig config = ValidatorConfig::Off;
  bool detected = false;  // the reviewer flagged the candidate
  bool parse_ok = false;  // stages of the program that reached compilation
  bool check_ok = false;
  bool eval_ok = false;
  bool end_to_end_ok = false;  // the session went Live; implies eval_ok
  std::string code;            // first diagnostic of the injected fault
};

struct ConfigSummary {
  int total = 0;
  int parse_ok = 0;
  int check_ok = 0;
  int eval_ok = 0;
  int end_to_end_ok = 0;
  int injected = 0;
  int detected = 0;
  std::map<std::string, int> by_code;  // failures keyed by first code

  double success_rate() const { return total ? double(end_to_end_ok) / total : 0.0; }
  double detection_rate() const { return injected ? double(detected) / injected : 0.0; }
};

struct AblationReport {
  std::vector<AblationRow> rows;  // sorted by fixture, mutation, config

  ConfigSummary summary(ValidatorConfig c) const;
  std::vector<ValidatorConfig> configs() const;  // present in rows
  /// header: fixture,mutation,op,config,detected,parse_ok,check_ok,eval_ok,end_to_end_ok,code
  std::string csv() const;
  std::string table() const;
  nlohmann::json summary_json() const;
};

/// Deterministic for fixed fixtures and options.
AblationReport run_ablation(const std::vector<AblationFixture>& fixtures, const AblationOptions& options);

/// Seed of mutation `index` of `fixture`.
std::uint64_t mutation_seed(std::uint64_t seed, std::string_view fixture, int index);

}  // namespace parlogue::cli
