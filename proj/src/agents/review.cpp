#include "parlogue/agents/review.hpp"

#include <algorithm>

#include "parlogue/pdl/checker.hpp"
#include "parlogue/pdl/parser.hpp"

namespace parlogue::agents {

using nlohmann::json;

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Approved: return "approved";
    case VerdictStatus::Revised: return "revised";
    case VerdictStatus::Rejected: return "rejected";
  }
  return "?";
}

json to_json(const OaVerdict& v) {
  return json{{"status", to_string(v.status)},
              {"revised_output", v.revised_output ? to_json(*v.revised_output) : json(nullptr)},
              {"diagnostics", pdl::to_json(v.diagnostics)},
              {"rounds", v.rounds}};
}

std::vector<pdl::Diagnostic> static_review(const CaOutput& candidate, const pdl::MethodRegistry& registry,
                                           const params::ParamSet& params) {
  std::vector<pdl::Diagnostic> diags;
  std::vector<pdl::MethodDef> methods;
  bool parsed = true;
  for (const auto& src : candidate.method_new) {
    auto r = pdl::parse_methods(src);
    if (!r.ok()) {
      parsed = false;
      diags.insert(diags.end(), r.diagnostics.begin(), r.diagnostics.end());
      continue;
    }
    for (auto& m : *r.value) methods.push_back(std::move(m));
  }

  for (const auto& dep : candidate.dependency) {
    bool known = registry.find(dep) != nullptr ||
                 std::any_of(methods.begin(), methods.end(), [&](const pdl::MethodDef& m) { return m.name == dep; });
    if (!known && parsed) {
      diags.push_back(pdl::error(pdl::code::kUnregisteredMethod,
                                 "dependency '" + dep + "' is neither defined nor registered"));
    }
  }

  auto logic = pdl::parse(candidate.logic);
  if (!logic.ok()) {
    diags.insert(diags.end(), logic.diagnostics.begin(), logic.diagnostics.end());
    if (parsed) {
      auto more = pdl::check_methods(methods, registry);
      diags.insert(diags.end(), more.begin(), more.end());
    }
    return diags;
  }
  if (!parsed) return diags;
  auto program = std::move(*logic.value);
  program.methods.insert(program.methods.begin(), methods.begin(), methods.end());
  auto more = pdl::check(program, registry, params);
  diags.insert(diags.end(), more.begin(), more.end());
  return diags;
}

std::string review_message(const CaOutput& candidate, const std::vector<pdl::Diagnostic>& diagnostics) {
  return "<candidate>\n" + to_json(candidate).dump(2) + "\n</candidate>\n<diagnostics>\n" +
         pdl::render(diagnostics) + "</diagnostics>";
}

OaVerdict run_oa_review(const CaOutput& candidate, const pdl::MethodRegistry& registry,
                        const params::ParamSet& params, LlmBackend& backend, const PromptTemplate& tmpl,
                        const ReviewOptions& options) {
  if (options.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  OaVerdict verdict;
  verdict.diagnostics = static_review(candidate, registry, params);
  if (verdict.diagnostics.empty()) {
    verdict.status = VerdictStatus::Approved;
    return verdict;
  }

  AgentRequest request;
  request.agent = AgentKind::Optimizer;
  request.system_prompt = render_prompt(tmpl, {{"library", library_listing(registry)}});
  CaOutput current = candidate;
  while (verdict.rounds < options.max_rounds) {
    ++verdict.rounds;
    request.messages = {{"user", review_message(current, verdict.diagnostics)}};
    std::string raw;
    try {
      raw = backend.send(request, options.timeout, options.stop);
    } catch (const BackendError& e) {
      verdict.status = VerdictStatus::Rejected;
      verdict.diagnostics.push_back(
          pdl::error(pdl::code::kTransport, "review backend " + std::string(to_string(e.code())) + ": " + e.what()));
      return verdict;
    }
    try {
      current = parse_ca_output(raw);
    } catch (const ProtocolError& e) {
      verdict.diagnostics.push_back(pdl::error(pdl::code::kProtocol, std::string("review reply rejected: ") + e.what()));
      continue;
    }
    verdict.diagnostics = static_review(current, registry, params);
    if (verdict.diagnostics.empty()) {
      verdict.status = VerdictStatus::Revised;
      verdict.revised_output = current;
      return verdict;
    }
  }
  verdict.status = VerdictStatus::Rejected;
  return verdict;
}

}  // namespace parlogue::agents
