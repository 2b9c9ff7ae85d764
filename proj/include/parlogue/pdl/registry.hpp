#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "parlogue/pdl/ast.hpp"

namespace parlogue::pdl {

struct RegisteredMethod {
  std::shared_ptr<const MethodDef> def;
  std::string key;
  std::string source;              // canonical formatted text
  std::vector<std::string> deps;   // names of called methods
};

/// Append-only store of validated methods. Copies share their entries, so a
/// copy is a cheap read snapshot.
class MethodRegistry {
 public:
  const RegisteredMethod* find(std::string_view name) const;
  const RegisteredMethod* find_by_key(std::string_view key) const;
  std::size_t size() const { return by_name_.size(); }
  bool empty() const { return by_name_.empty(); }
  /// Registered names in lexicographic order.
  std::vector<std::string> names() const;

 private:
  friend struct RegistryWriter;
  std::map<std::string, std::shared_ptr<const RegisteredMethod>, std::less<>> by_name_;
  std::map<std::string, std::shared_ptr<const RegisteredMethod>, std::less<>> by_key_;
};

struct Registration {
  std::vector<std::string> keys;  // one per input method, in input order
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// sha256 over the canonical method text followed by the sorted keys of the
/// methods it calls.
std::string method_key(const MethodDef& method, std::vector<std::string> dep_keys);

/// All-or-nothing. On any diagnostic the registry is unchanged. A method
/// identical to a registered one reuses its key; a different body under a
/// registered name is E_DUPLICATE_METHOD.
Registration register_methods(const std::vector<MethodDef>& methods, MethodRegistry& registry);

}  // namespace parlogue::pdl
