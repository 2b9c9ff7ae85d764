#include "parlogue/pdl/registry.hpp"

#include <algorithm>
#include <functional>

#include "parlogue/common/hash.hpp"
#include "parlogue/pdl/checker.hpp"
#include "parlogue/pdl/format.hpp"

namespace parlogue::pdl {

const RegisteredMethod* MethodRegistry::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : it->second.get();
}

const RegisteredMethod* MethodRegistry::find_by_key(std::string_view key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : it->second.get();
}

std::vector<std::string> MethodRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : by_name_) out.push_back(name);
  return out;
}

struct RegistryWriter {
  static void insert(MethodRegistry& r, std::shared_ptr<const RegisteredMethod> entry) {
    r.by_key_.emplace(entry->key, entry);
    r.by_name_.emplace(entry->def->name, std::move(entry));
  }
};

std::string method_key(const MethodDef& method, std::vector<std::string> dep_keys) {
  std::sort(dep_keys.begin(), dep_keys.end());
  std::string material = format(method);
  for (const auto& k : dep_keys) material += "\n" + k;
  return sha256_hex(material);
}

Registration register_methods(const std::vector<MethodDef>& methods, MethodRegistry& registry) {
  Registration out;
  out.diagnostics = check_methods(methods, registry);
  if (!out.diagnostics.empty()) return out;

  // Keys depend on callee keys; the checker has ruled out cycles.
  std::map<std::string, std::string> batch_keys;
  std::function<std::string(const MethodDef&)> key_of = [&](const MethodDef& m) -> std::string {
    if (auto it = batch_keys.find(m.name); it != batch_keys.end()) return it->second;
    std::vector<std::string> deps;
    for (const auto& callee : called_methods(m.body)) {
      auto sibling = std::find_if(methods.begin(), methods.end(), [&](const MethodDef& d) { return d.name == callee; });
      if (sibling != methods.end()) {
        deps.push_back(key_of(*sibling));
      } else if (const auto* r = registry.find(callee)) {
        deps.push_back(r->key);
      }
    }
    return batch_keys[m.name] = method_key(m, std::move(deps));
  };

  std::vector<std::shared_ptr<const RegisteredMethod>> fresh;
  for (const auto& m : methods) {
    const std::string key = key_of(m);
    out.keys.push_back(key);
    if (const auto* existing = registry.find(m.name)) {
      if (existing->key != key) {
        out.diagnostics.push_back(error(code::kDuplicateMethod,
                                        "method '" + m.name + "' is already registered with a different body", m.span));
      }
      continue;
    }
    auto entry = std::make_shared<RegisteredMethod>();
    entry->def = std::make_shared<const MethodDef>(m);
    entry->key = key;
    entry->source = format(m);
    entry->deps = called_methods(m.body);
    fresh.push_back(std::move(entry));
  }
  if (!out.diagnostics.empty()) {
    out.keys.clear();
    return out;
  }
  for (auto& e : fresh) RegistryWriter::insert(registry, std::move(e));
  return out;
}

}  // namespace parlogue::pdl
