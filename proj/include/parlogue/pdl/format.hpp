#pragma once

#include <string>

#include "parlogue/pdl/ast.hpp"

namespace parlogue::pdl {

/// Canonical source: 2-space indentation, one statement per line, minimal
/// parentheses, shortest round-trip number spelling, a blank line between
/// the param, method and logic sections. Ends with a newline.
std::string format(const Program& program);
std::string format(const MethodDef& method);
/// Methods separated by blank lines; empty input yields "".
std::string format(const std::vector<MethodDef>& methods);
std::string format(const Expr& expr);

}  // namespace parlogue::pdl
