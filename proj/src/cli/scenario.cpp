#include "parlogue/cli/scenario.hpp"

#include <fstream>
#include <stdexcept>

#include "parlogue/pipeline/replay.hpp"
#include "parlogue/pipeline/runner.hpp"

namespace parlogue::cli {

using nlohmann::json;

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k != "description" && k != "seed" && k != "final_prompt_variant" && k != "review" && k != "script" &&
        k != "inputs") {
      throw std::invalid_argument("unknown scenario field '" + k + "'");
    }
  }
  Scenario s;
  try {
    s.description = j.value("description", "");
    s.seed = j.value("seed", std::uint64_t{0});
    s.final_variant = agents::final_variant_from_string(j.value("final_prompt_variant", "strict"));
    s.review = j.value("review", true);
    s.script = pipeline::fixture_script(j);
    for (const auto& in : j.at("inputs")) {
      if (!in.is_object() || !in.contains("op")) throw std::invalid_argument("every input needs an op");
      s.inputs.push_back(in);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed scenario: ") + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument(path.string() + " is not valid JSON");
  return scenario_from_json(j);
}

std::shared_ptr<pipeline::Session> run_scenario(const Scenario& scenario, const std::filesystem::path& journal,
                                                const std::filesystem::path& asset_dir, const std::string& id) {
  pipeline::SessionConfig cfg;
  cfg.seed = scenario.seed;
  cfg.final_variant = scenario.final_variant;
  cfg.review = scenario.review;
  cfg.asset_dir = asset_dir;
  auto j = journal.empty() ? std::make_shared<pipeline::Journal>() : std::make_shared<pipeline::Journal>(journal);
  auto session = std::make_shared<pipeline::Session>(id, cfg, pipeline::scripted_backend(scenario.script),
                                                     std::make_shared<compilesvc::CompileClient>(), j);
  for (const auto& in : scenario.inputs) pipeline::apply_input(*session, in);
  return session;
}

}  // namespace parlogue::cli
