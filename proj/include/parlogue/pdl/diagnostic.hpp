#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace parlogue::pdl {

/// 1-based line and column; `offset` is the byte offset of the first
/// character and is not serialized.
struct Span {
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t len = 0;
  std::size_t offset = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { Error, Warning };

// Stable diagnostic codes.
namespace code {
inline constexpr std::string_view kSyntax = "E_SYNTAX";
inline constexpr std::string_view kUnknownIdent = "E_UNKNOWN_IDENT";
inline constexpr std::string_view kUnregisteredMethod = "E_UNREGISTERED_METHOD";
inline constexpr std::string_view kArity = "E_ARITY";
inline constexpr std::string_view kType = "E_TYPE";
inline constexpr std::string_view kDuplicateMethod = "E_DUPLICATE_METHOD";
inline constexpr std::string_view kReservedName = "E_RESERVED_NAME";
inline constexpr std::string_view kRecursion = "E_RECURSION";
inline constexpr std::string_view kMissingReturn = "E_MISSING_RETURN";
inline constexpr std::string_view kReturnOutsideMethod = "E_RETURN_OUTSIDE_METHOD";
inline constexpr std::string_view kEmitInMethod = "E_EMIT_IN_METHOD";
inline constexpr std::string_view kDuplicateLocal = "E_DUPLICATE_LOCAL";
inline constexpr std::string_view kDuplicateParam = "E_DUPLICATE_PARAM";
inline constexpr std::string_view kAssignParam = "E_ASSIGN_PARAM";
inline constexpr std::string_view kParamMissing = "E_PARAM_MISSING";
inline constexpr std::string_view kParamKind = "E_PARAM_KIND";
inline constexpr std::string_view kLoopBound = "E_LOOP_BOUND";
inline constexpr std::string_view kRuntimeDomain = "E_RUNTIME_DOMAIN";
inline constexpr std::string_view kCapExceeded = "E_CAP_EXCEEDED";
inline constexpr std::string_view kUnresolvedRef = "E_UNRESOLVED_REF";
inline constexpr std::string_view kTransport = "E_TRANSPORT";
inline constexpr std::string_view kProtocol = "E_PROTOCOL";
}  // namespace code

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  Span span;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Diagnostic error(std::string_view code, std::string message, Span span = {});
bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// {"severity","code","message","span":{"line","col","len"}}
nlohmann::json to_json(const Diagnostic& d);
Diagnostic diagnostic_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<Diagnostic>& ds);
std::vector<Diagnostic> diagnostics_from_json(const nlohmann::json& j);

/// "line:col: CODE message", one per line.
std::string render(const std::vector<Diagnostic>& ds);

}  // namespace parlogue::pdl
