#include "parlogue/compilesvc/client.hpp"

#include <map>
#include <set>

#include "parlogue/compilesvc/compiler.hpp"
#include "parlogue/pdl/format.hpp"
#include "parlogue/pdl/parser.hpp"

namespace parlogue::compilesvc {

using nlohmann::json;

std::string_view to_string(CompileMode m) { return m == CompileMode::InProcess ? "in_process" : "remote"; }

CompileMode compile_mode_from_string(std::string_view s) {
  if (s == "in_process") return CompileMode::InProcess;
  if (s == "remote") return CompileMode::Remote;
  throw std::invalid_argument("unknown compiler mode '" + std::string(s) + "'");
}

CompileClient::CompileClient(ClientConfig config) : config_(std::move(config)) {}

ClientStats CompileClient::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

CompileResponse CompileClient::compile_remote(const CompileRequest& request, const pdl::MethodRegistry& known) {
  std::lock_guard lock(mu_);
  return remote_locked(request, known);
}

CompileResponse CompileClient::remote_locked(const CompileRequest& request, const pdl::MethodRegistry& known) {
  auto transport_fail = [&](const std::string& msg) {
    conn_.reset();
    return CompileResponse{request.id, CompileStatus::Fail, std::nullopt,
                           {pdl::error(pdl::code::kTransport, "compile worker " + config_.host + ":" +
                                                                 std::to_string(config_.port) + ": " + msg)}};
  };
  try {
    if (!conn_.valid()) conn_ = connect_tcp(config_.host, config_.port, config_.timeout);
  } catch (const TransportError& e) {
    return transport_fail(e.what());
  }
  if (!write_all(conn_.get(), encode_frame(to_json(request)), config_.timeout)) {
    return transport_fail("write failed");
  }
  for (;;) {
    std::string payload;
    auto st = read_frame(conn_.get(), payload, config_.timeout, config_.timeout);
    if (st != ReadStatus::Ok) {
      return transport_fail(st == ReadStatus::IdleTimeout ? "timed out" : "connection lost");
    }
    json j = json::parse(payload, nullptr, false);
    if (!j.is_object()) return transport_fail("reply is not a JSON object");
    if (j.value("kind", "") == "fetch") {
      std::vector<MethodSource> sources;
      for (const auto& k : j.value("keys", std::vector<std::string>{})) {
        if (const auto* m = known.find_by_key(k)) sources.push_back({k, m->source});
      }
      if (!write_all(conn_.get(), encode_frame(sources_frame(request.id, sources)), config_.timeout)) {
        return transport_fail("write failed");
      }
      continue;
    }
    CompileResponse resp;
    try {
      resp = response_from_json(j);
    } catch (const std::invalid_argument& e) {
      return transport_fail(e.what());
    }
    if (resp.id == request.id) return resp;
    if (resp.id == 0) {
      return transport_fail("worker rejected the request: " +
                            (resp.diagnostics.empty() ? std::string("?") : resp.diagnostics[0].message));
    }
    // A reply to an abandoned request; keep reading.
  }
}

CompileResponse CompileClient::compile_locked(const CompileRequest& request, const pdl::MethodRegistry& known) {
  if (config_.mode == CompileMode::Remote) {
    auto resp = remote_locked(request, known);
    bool transport = !resp.ok() && resp.diagnostics.size() == 1 && resp.diagnostics[0].code == pdl::code::kTransport;
    if (!transport) {
      ++stats_.remote;
      return resp;
    }
    ++stats_.fallbacks;
    stats_.transport.push_back(resp.diagnostics[0]);
  }
  ++stats_.in_process;
  return compile_unit(request, registry_lookup(known));
}

CompileResponse CompileClient::compile(const CompileRequest& request, const pdl::MethodRegistry& known) {
  std::lock_guard lock(mu_);
  return compile_locked(request, known);
}

MethodBatch CompileClient::compile_methods(const std::vector<pdl::MethodDef>& methods, pdl::MethodRegistry& registry) {
  std::lock_guard lock(mu_);
  MethodBatch out;
  pdl::MethodRegistry working = registry;

  // Callees first; ties keep input order.
  std::map<std::string, std::vector<std::size_t>> by_name;
  for (std::size_t i = 0; i < methods.size(); ++i) by_name[methods[i].name].push_back(i);
  std::vector<std::vector<std::string>> calls(methods.size());
  std::vector<std::size_t> blocking(methods.size(), 0);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    calls[i] = pdl::called_methods(methods[i].body);
    for (const auto& c : calls[i]) {
      if (c != methods[i].name && by_name.count(c)) ++blocking[i];
      if (c == methods[i].name) ++blocking[i];
    }
  }
  std::vector<std::size_t> order;
  std::vector<bool> placed(methods.size(), false);
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (placed[i] || blocking[i] != 0) continue;
      placed[i] = true;
      order.push_back(i);
      progress = true;
      for (std::size_t k = 0; k < methods.size(); ++k) {
        if (placed[k]) continue;
        for (const auto& c : calls[k]) {
          if (c == methods[i].name && by_name[c].back() == i) --blocking[k];
        }
      }
    }
  }

  std::map<std::size_t, std::string> keys;
  auto send = [&](const std::string& source, const std::vector<std::string>& callees) {
    CompileRequest req{next_id_++, UnitKind::Method, source, dependency_closure(working, callees), std::nullopt};
    return compile_locked(req, working);
  };

  for (auto i : order) {
    const auto& m = methods[i];
    auto resp = send(pdl::format(m), calls[i]);
    if (!resp.ok()) {
      out.diagnostics = std::move(resp.diagnostics);
      return out;
    }
    auto linked = pdl::register_methods({m}, working);
    if (!linked.ok()) {
      out.diagnostics = std::move(linked.diagnostics);
      return out;
    }
    if (linked.keys[0] != *resp.key) {
      out.diagnostics.push_back(pdl::error(pdl::code::kProtocol, "compile service returned a different key for '" +
                                                                     m.name + "'"));
      return out;
    }
    keys[i] = *resp.key;
  }

  if (order.size() != methods.size()) {
    std::vector<pdl::MethodDef> rest;
    std::vector<std::string> callees;
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (placed[i]) continue;
      rest.push_back(methods[i]);
      callees.insert(callees.end(), calls[i].begin(), calls[i].end());
    }
    auto resp = send(pdl::format(rest), callees);
    out.diagnostics = resp.ok() ? std::vector<pdl::Diagnostic>{pdl::error(pdl::code::kRecursion, "methods call each other")}
                                : std::move(resp.diagnostics);
    return out;
  }

  for (std::size_t i = 0; i < methods.size(); ++i) out.keys.push_back(keys[i]);
  registry = std::move(working);
  return out;
}

CompileResponse CompileClient::compile_logic(std::string_view source, const pdl::MethodRegistry& registry,
                                             const params::ParamSet& params) {
  std::vector<std::string> callees;
  auto parsed = pdl::parse(source);
  if (parsed.ok()) {
    const auto& prog = *parsed.value;
    if (prog.logic) callees = pdl::called_methods(*prog.logic);
    for (const auto& m : prog.methods) {
      auto more = pdl::called_methods(m.body);
      callees.insert(callees.end(), more.begin(), more.end());
    }
  }
  std::lock_guard lock(mu_);
  CompileRequest req{next_id_++, UnitKind::Logic, std::string(source), dependency_closure(registry, callees), params};
  return compile_locked(req, registry);
}

}  // namespace parlogue::compilesvc
