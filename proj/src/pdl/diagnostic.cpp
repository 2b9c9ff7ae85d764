#include "parlogue/pdl/diagnostic.hpp"

#include <algorithm>
#include <stdexcept>

namespace parlogue::pdl {

Diagnostic error(std::string_view code, std::string message, Span span) {
  return Diagnostic{Severity::Error, std::string(code), std::move(message), span};
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

nlohmann::json to_json(const Diagnostic& d) {
  return {{"severity", d.severity == Severity::Error ? "error" : "warning"},
          {"code", d.code},
          {"message", d.message},
          {"span", {{"line", d.span.line}, {"col", d.span.col}, {"len", d.span.len}}}};
}

Diagnostic diagnostic_from_json(const nlohmann::json& j) {
  Diagnostic d;
  const auto severity = j.at("severity").get<std::string>();
  if (severity == "error") {
    d.severity = Severity::Error;
  } else if (severity == "warning") {
    d.severity = Severity::Warning;
  } else {
    throw std::invalid_argument("unknown severity '" + severity + "'");
  }
  d.code = j.at("code").get<std::string>();
  d.message = j.at("message").get<std::string>();
  const auto& span = j.at("span");
  d.span.line = span.at("line").get<std::size_t>();
  d.span.col = span.at("col").get<std::size_t>();
  d.span.len = span.at("len").get<std::size_t>();
  return d;
}

nlohmann::json to_json(const std::vector<Diagnostic>& ds) {
  auto arr = nlohmann::json::array();
  for (const auto& d : ds) arr.push_back(to_json(d));
  return arr;
}

std::vector<Diagnostic> diagnostics_from_json(const nlohmann::json& j) {
  std::vector<Diagnostic> out;
  for (const auto& item : j) out.push_back(diagnostic_from_json(item));
  return out;
}

std::string render(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    out += std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + ": " + d.code + " " + d.message + "\n";
  }
  return out;
}

}  // namespace parlogue::pdl
