#include "parlogue/compilesvc/compiler.hpp"

#include <algorithm>
#include <set>

#include "parlogue/pdl/checker.hpp"
#include "parlogue/pdl/parser.hpp"

namespace parlogue::compilesvc {

SourceLookup registry_lookup(const pdl::MethodRegistry& registry) {
  return [&registry](std::string_view key) -> std::optional<std::string> {
    const auto* m = registry.find_by_key(key);
    if (m == nullptr) return std::nullopt;
    return m->source;
  };
}

std::vector<std::string> dependency_closure(const pdl::MethodRegistry& registry, const std::vector<std::string>& names) {
  std::set<std::string> keys;
  std::set<std::string> seen;
  std::vector<std::string> todo(names.begin(), names.end());
  while (!todo.empty()) {
    auto name = std::move(todo.back());
    todo.pop_back();
    if (!seen.insert(name).second) continue;
    const auto* m = registry.find(name);
    if (m == nullptr) continue;
    keys.insert(m->key);
    todo.insert(todo.end(), m->deps.begin(), m->deps.end());
  }
  return {keys.begin(), keys.end()};
}

namespace {

CompileResponse fail(const CompileRequest& req, std::vector<pdl::Diagnostic> diags) {
  return CompileResponse{req.id, CompileStatus::Fail, std::nullopt, std::move(diags)};
}

// Registry holding exactly the requested dependencies, or diagnostics.
std::optional<pdl::MethodRegistry> link_deps(const CompileRequest& req, const SourceLookup& lookup,
                                             std::vector<pdl::Diagnostic>& diags) {
  std::vector<pdl::MethodDef> methods;
  std::set<std::string> keys(req.deps.begin(), req.deps.end());
  for (const auto& key : keys) {
    auto src = lookup(key);
    if (!src) {
      diags.push_back(pdl::error(pdl::code::kUnregisteredMethod, "no source for dependency key " + key));
      continue;
    }
    auto parsed = pdl::parse_methods(*src);
    if (!parsed.ok()) {
      diags.push_back(pdl::error(pdl::code::kProtocol, "source for dependency key " + key + " does not parse"));
      continue;
    }
    for (auto& m : *parsed.value) methods.push_back(std::move(m));
  }
  if (!diags.empty()) return std::nullopt;
  pdl::MethodRegistry reg;
  auto linked = pdl::register_methods(methods, reg);
  if (!linked.ok()) {
    diags.push_back(pdl::error(pdl::code::kProtocol, "dependency sources do not link: " + linked.diagnostics[0].message));
    return std::nullopt;
  }
  for (const auto& key : keys) {
    if (reg.find_by_key(key) == nullptr) {
      diags.push_back(pdl::error(pdl::code::kProtocol, "dependency key " + key + " does not match its source"));
    }
  }
  if (!diags.empty()) return std::nullopt;
  return reg;
}

}  // namespace

CompileResponse compile_unit(const CompileRequest& req, const SourceLookup& lookup) {
  std::vector<pdl::Diagnostic> diags;
  if (req.kind == UnitKind::Method) {
    auto parsed = pdl::parse_methods(req.source);
    if (!parsed.ok()) return fail(req, parsed.diagnostics);
    if (parsed.value->empty()) return fail(req, {pdl::error(pdl::code::kSyntax, "method unit defines no method")});
    auto reg = link_deps(req, lookup, diags);
    if (!reg) return fail(req, std::move(diags));
    auto r = pdl::register_methods(*parsed.value, *reg);
    if (!r.ok()) return fail(req, std::move(r.diagnostics));
    if (parsed.value->size() != 1) {
      return fail(req, {pdl::error(pdl::code::kSyntax, "method unit must define exactly one method",
                                   (*parsed.value)[1].span)});
    }
    return CompileResponse{req.id, CompileStatus::Ok, r.keys[0], {}};
  }

  auto parsed = pdl::parse(req.source);
  if (!parsed.ok()) return fail(req, parsed.diagnostics);
  auto reg = link_deps(req, lookup, diags);
  if (!reg) return fail(req, std::move(diags));
  auto params = req.params ? *req.params : pdl::params_from_program(*parsed.value);
  diags = pdl::check(*parsed.value, *reg, params);
  if (!diags.empty()) return fail(req, std::move(diags));
  return CompileResponse{req.id, CompileStatus::Ok, std::nullopt, {}};
}

}  // namespace parlogue::compilesvc
