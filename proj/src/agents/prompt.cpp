#include "parlogue/agents/prompt.hpp"

#include <fstream>
#include <sstream>

#include "parlogue/common/text.hpp"
#include "parlogue/params/params.hpp"
#include "parlogue/pdl/builtins.hpp"

namespace parlogue::agents {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::Reasoner: return "reasoner";
    case AgentKind::Coder: return "coder";
    case AgentKind::Optimizer: return "optimizer";
  }
  return "?";
}

std::string_view to_string(FinalVariant v) { return v == FinalVariant::Strict ? "strict" : "flexible"; }

FinalVariant final_variant_from_string(std::string_view s) {
  if (s == "strict") return FinalVariant::Strict;
  if (s == "flexible") return FinalVariant::Flexible;
  throw std::invalid_argument("unknown final prompt variant '" + std::string(s) + "'");
}

const PromptSection* PromptTemplate::find(std::string_view key) const {
  for (const auto& s : sections) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

const std::vector<std::string>& section_order(AgentKind agent) {
  static const std::vector<std::string> reasoner{"role", "approach", "parameters", "user", "response", "final"};
  static const std::vector<std::string> coder{"role", "task", "parameters", "library", "response"};
  static const std::vector<std::string> optimizer{"role", "review", "library", "response"};
  switch (agent) {
    case AgentKind::Reasoner: return reasoner;
    case AgentKind::Coder: return coder;
    case AgentKind::Optimizer: return optimizer;
  }
  return reasoner;
}

namespace {

bool tag_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

void put_section(PromptTemplate& t, std::string key, std::string text) {
  for (auto& s : t.sections) {
    if (s.key == key) {
      s.text = std::move(text);
      return;
    }
  }
  t.sections.push_back({std::move(key), std::move(text)});
}

void merge(PromptTemplate& into, const PromptTemplate& from) {
  for (const auto& s : from.sections) put_section(into, s.key, s.text);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read prompt asset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string substitute(std::string_view text, const PromptContext& context) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto open = text.find("{{", i);
    if (open == std::string_view::npos) break;
    auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(text.substr(i, open - i));
    auto name = trim(text.substr(open + 2, close - open - 2));
    auto it = context.find(name);
    if (it == context.end()) throw std::invalid_argument("no value for prompt placeholder '" + std::string(name) + "'");
    out += it->second;
    i = close + 2;
  }
  out.append(text.substr(i));
  return out;
}

std::string_view kind_blurb(params::KindTag tag) {
  using params::KindTag;
  switch (tag) {
    case KindTag::Number: return "real value, optional inclusive range";
    case KindTag::Integer: return "whole value, optional inclusive range";
    case KindTag::Boolean: return "true or false";
    case KindTag::Choice: return "one of at least two listed options";
    case KindTag::PointRef: return "id of a point picked in the scene";
    case KindTag::CurveRef: return "id of a polyline or ellipse picked in the scene";
    case KindTag::ShapeRef: return "id of any shape picked in the scene";
  }
  return "";
}

}  // namespace

PromptTemplate parse_template(AgentKind agent, std::string_view text) {
  PromptTemplate t;
  t.agent = agent;
  std::size_t i = 0;
  while ((i = text.find('<', i)) != std::string_view::npos) {
    std::size_t j = i + 1;
    while (j < text.size() && tag_char(text[j])) ++j;
    if (j == i + 1 || j >= text.size() || text[j] != '>') {
      ++i;
      continue;
    }
    std::string key(text.substr(i + 1, j - i - 1));
    std::string close = "</" + key + ">";
    auto end = text.find(close, j + 1);
    if (end == std::string_view::npos) {
      i = j;
      continue;
    }
    put_section(t, key, std::string(trim(text.substr(j + 1, end - j - 1))));
    i = end + close.size();
  }
  return t;
}

PromptTemplate load_template(const std::filesystem::path& asset_dir, AgentKind agent, FinalVariant variant) {
  auto dir = asset_dir / "prompts";
  auto t = parse_template(agent, read_file(dir / (std::string(to_string(agent)) + ".txt")));
  if (agent == AgentKind::Reasoner) {
    auto final_file = dir / ("reasoner_final_" + std::string(to_string(variant)) + ".txt");
    merge(t, parse_template(agent, read_file(final_file)));
  }
  return t;
}

std::string kinds_listing() {
  std::string out = "Parameter kinds:\n";
  for (auto tag : params::all_kind_tags()) {
    out += "- ";
    out += to_string(tag);
    out += ": ";
    out += kind_blurb(tag);
    out += '\n';
  }
  return out;
}

std::string library_listing(const pdl::MethodRegistry& registry) {
  std::string out = "Builtins:\n";
  for (const auto& b : pdl::all_builtins()) {
    out += "- " + std::string(b.name) + "(";
    for (std::size_t i = 0; i < b.params.size(); ++i) {
      if (i) out += ", ";
      out += to_string(b.params[i]);
    }
    out += ") -> ";
    out += b.result_from_first ? "same as first argument" : std::string(to_string(b.result));
    out += '\n';
  }
  out += "Registered methods:\n";
  if (registry.empty()) out += "(none)\n";
  for (const auto& name : registry.names()) {
    const auto& def = *registry.find(name)->def;
    out += "- " + def.name + "(";
    for (std::size_t i = 0; i < def.params.size(); ++i) {
      if (i) out += ", ";
      out += def.params[i].name + ": " + std::string(pdl::to_string(def.params[i].type));
    }
    out += ") -> " + std::string(pdl::to_string(def.return_type)) + '\n';
  }
  return out;
}

std::string render_prompt(const PromptTemplate& tmpl, const PromptContext& context) {
  std::string out;
  for (const auto& key : section_order(tmpl.agent)) {
    const auto* s = tmpl.find(key);
    if (s == nullptr || trim(s->text).empty()) throw MissingSection(key);
    std::string body = substitute(s->text, context);
    if (key == "parameters") body += "\n\n" + kinds_listing();
    while (!body.empty() && body.back() == '\n') body.pop_back();
    out += "<" + key + ">\n" + body + "\n</" + key + ">\n";
  }
  return out;
}

}  // namespace parlogue::agents
