#pragma once

#include <chrono>
#include <optional>
#include <stop_token>
#include <string_view>
#include <vector>

#include "parlogue/agents/backend.hpp"
#include "parlogue/agents/envelope.hpp"
#include "parlogue/agents/prompt.hpp"
#include "parlogue/params/params.hpp"
#include "parlogue/pdl/diagnostic.hpp"
#include "parlogue/pdl/registry.hpp"

namespace parlogue::agents {

enum class VerdictStatus { Approved, Revised, Rejected };

std::string_view to_string(VerdictStatus s);

struct OaVerdict {
  VerdictStatus status = VerdictStatus::Rejected;
  std::optional<CaOutput> revised_output;
  std::vector<pdl::Diagnostic> diagnostics;
  int rounds = 0;  // backend calls made
};

nlohmann::json to_json(const OaVerdict& v);

/// Parses the new methods then the logic, and checks them together against
/// `registry` and `params`. Dependency names that are neither new nor
/// registered are E_UNREGISTERED_METHOD.
std::vector<pdl::Diagnostic> static_review(const CaOutput& candidate, const pdl::MethodRegistry& registry,
                                           const params::ParamSet& params);

struct ReviewOptions {
  int max_rounds = 2;
  std::chrono::milliseconds timeout{60'000};
  std::stop_token stop;
};

/// A clean candidate is Approved without a backend call. Otherwise the
/// candidate and its diagnostics go to the backend for revision until one
/// passes (Revised) or the rounds run out (Rejected). A backend failure is
/// Rejected with an E_TRANSPORT diagnostic.
OaVerdict run_oa_review(const CaOutput& candidate, const pdl::MethodRegistry& registry,
                        const params::ParamSet& params, LlmBackend& backend, const PromptTemplate& tmpl,
                        const ReviewOptions& options = {});

/// Text of the reviewer request for `candidate`.
std::string review_message(const CaOutput& candidate, const std::vector<pdl::Diagnostic>& diagnostics);

}  // namespace parlogue::agents
