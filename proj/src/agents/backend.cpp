#include "parlogue/agents/backend.hpp"

#include <fstream>

namespace parlogue::agents {

using nlohmann::json;

std::string_view to_string(BackendErrc e) {
  switch (e) {
    case BackendErrc::Timeout: return "timeout";
    case BackendErrc::Cancelled: return "cancelled";
    case BackendErrc::Transport: return "transport";
    case BackendErrc::Unmatched: return "unmatched";
    case BackendErrc::BadResponse: return "bad_response";
  }
  return "?";
}

BackendErrc backend_errc_from_string(std::string_view s) {
  for (auto e : {BackendErrc::Timeout, BackendErrc::Cancelled, BackendErrc::Transport, BackendErrc::Unmatched,
                 BackendErrc::BadResponse}) {
    if (to_string(e) == s) return e;
  }
  throw std::invalid_argument("unknown backend error '" + std::string(s) + "'");
}

std::optional<AgentKind> agent_kind_from_string(std::string_view s) {
  for (auto a : {AgentKind::Reasoner, AgentKind::Coder, AgentKind::Optimizer}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

json to_json(const ScriptEntry& e) {
  json j = json::object();
  if (e.agent) j["agent"] = to_string(*e.agent);
  if (!e.match.empty()) j["match"] = e.match;
  if (e.error) {
    j["error"] = to_string(*e.error);
  } else {
    j["response"] = e.response;
  }
  return j;
}

ScriptEntry script_entry_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("script entry must be an object");
  ScriptEntry e;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k == "agent") {
      auto name = it->get<std::string>();
      e.agent = agent_kind_from_string(name);
      if (!e.agent) throw std::invalid_argument("unknown agent '" + name + "' in script entry");
    } else if (k == "match") {
      e.match = it->get<std::string>();
    } else if (k == "response") {
      e.response = it->is_string() ? it->get<std::string>() : it->dump();
    } else if (k == "error") {
      e.error = backend_errc_from_string(it->get<std::string>());
    } else {
      throw std::invalid_argument("unknown script entry key '" + k + "'");
    }
  }
  if (!e.error && !j.contains("response")) throw std::invalid_argument("script entry needs a response");
  return e;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> entries) : entries_(std::move(entries)) {}

ScriptedBackend ScriptedBackend::from_json(const json& j) {
  std::vector<ScriptEntry> entries;
  for (const auto& e : j.at("entries")) entries.push_back(script_entry_from_json(e));
  return ScriptedBackend(std::move(entries));
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read script " + path.string());
  return from_json(json::parse(in));
}

std::size_t ScriptedBackend::consumed() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::size_t ScriptedBackend::remaining() const {
  std::lock_guard lock(mu_);
  return entries_.size() - next_;
}

std::string ScriptedBackend::send(const AgentRequest& request, std::chrono::milliseconds, std::stop_token stop) {
  if (stop.stop_requested()) throw BackendError(BackendErrc::Cancelled, "request cancelled");
  std::lock_guard lock(mu_);
  if (next_ >= entries_.size()) {
    throw BackendError(BackendErrc::Unmatched, "script exhausted at " + std::string(to_string(request.agent)) + " call");
  }
  const auto& e = entries_[next_];
  if (e.agent && *e.agent != request.agent) {
    throw BackendError(BackendErrc::Unmatched, "script entry " + std::to_string(next_) + " expects a " +
                                                   std::string(to_string(*e.agent)) + " call, got " +
                                                   std::string(to_string(request.agent)));
  }
  const std::string& last = request.messages.empty() ? request.system_prompt : request.messages.back().content;
  if (last.find(e.match) == std::string::npos) {
    throw BackendError(BackendErrc::Unmatched,
                       "script entry " + std::to_string(next_) + " does not match: '" + e.match + "' not in message");
  }
  ++next_;
  if (e.error) throw BackendError(*e.error, "scripted " + std::string(to_string(*e.error)));
  return e.response;
}

}  // namespace parlogue::agents
