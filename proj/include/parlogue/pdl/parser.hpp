#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "parlogue/pdl/ast.hpp"
#include "parlogue/pdl/diagnostic.hpp"

namespace parlogue::pdl {

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;  // empty exactly when value is set

  bool ok() const { return value.has_value(); }
};

/// program := paramDecl* methodDef* "logic" block
/// Stops at the first syntax error and reports it as E_SYNTAX.
ParseResult<Program> parse(std::string_view source);

/// methodDef*, as carried by a coding-agent method section.
ParseResult<std::vector<MethodDef>> parse_methods(std::string_view source);

}  // namespace parlogue::pdl
