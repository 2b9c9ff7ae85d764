#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "parlogue/pdl/registry.hpp"

namespace parlogue::agents {

enum class AgentKind { Reasoner, Coder, Optimizer };

std::string_view to_string(AgentKind kind);

/// Variants of the reasoner's closing section.
enum class FinalVariant { Strict, Flexible };

std::string_view to_string(FinalVariant v);
FinalVariant final_variant_from_string(std::string_view s);  // throws std::invalid_argument

struct PromptSection {
  std::string key;
  std::string text;
};

struct PromptTemplate {
  AgentKind agent = AgentKind::Reasoner;
  std::vector<PromptSection> sections;

  const PromptSection* find(std::string_view key) const;
};

class MissingSection : public std::runtime_error {
 public:
  explicit MissingSection(std::string section)
      : std::runtime_error("prompt template has no usable <" + section + "> section"), section_(std::move(section)) {}
  const std::string& section() const { return section_; }

 private:
  std::string section_;
};

/// Section keys in render order.
const std::vector<std::string>& section_order(AgentKind agent);

/// Reads `<key>...</key>` blocks. Text outside blocks is ignored; a later
/// block replaces an earlier one with the same key.
PromptTemplate parse_template(AgentKind agent, std::string_view text);

/// Loads the template for `agent` from `<asset_dir>/prompts`. The reasoner
/// also reads the `<final>` section for `variant`.
PromptTemplate load_template(const std::filesystem::path& asset_dir, AgentKind agent,
                             FinalVariant variant = FinalVariant::Strict);

/// Values for `{{name}}` placeholders.
using PromptContext = std::map<std::string, std::string, std::less<>>;

/// Sections in the agent's order, each wrapped in its tag; sections outside
/// that order are not rendered. The parameters section gets the list of
/// parameter kinds appended. Errors: MissingSection for an absent or blank
/// section, std::invalid_argument for a placeholder missing from `context`.
std::string render_prompt(const PromptTemplate& tmpl, const PromptContext& context);

/// One line per parameter kind, in declaration order.
std::string kinds_listing();

/// Signatures of the builtins followed by the registered methods.
std::string library_listing(const pdl::MethodRegistry& registry);

}  // namespace parlogue::agents
