#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "parlogue/pipeline/session.hpp"

namespace parlogue::cli {

/// A scripted conversation: agent replies plus the user inputs that drive
/// them, in journal input form.
struct Scenario {
  std::string description;
  nlohmann::json script;  // {"entries":[...]}
  std::vector<nlohmann::json> inputs;
  std::uint64_t seed = 0;
  agents::FinalVariant final_variant = agents::FinalVariant::Strict;
  bool review = true;
};

/// {"description"?,"seed"?,"final_prompt_variant"?,"review"?,"script","inputs"}.
/// Throws std::invalid_argument.
Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

/// Runs every input in order against a fresh session journaling to `journal`
/// (in memory when empty). Exceptions from an input propagate.
std::shared_ptr<pipeline::Session> run_scenario(const Scenario& scenario, const std::filesystem::path& journal,
                                                const std::filesystem::path& asset_dir, const std::string& id);

}  // namespace parlogue::cli
