#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <vector>

#include <json.hpp>

#include "parlogue/agents/prompt.hpp"

namespace parlogue::agents {

struct ChatMessage {
  std::string role;  // "user" | "assistant" | "system"
  std::string content;
};

struct AgentRequest {
  AgentKind agent = AgentKind::Reasoner;
  std::string system_prompt;
  std::vector<ChatMessage> messages;
};

enum class BackendErrc { Timeout, Cancelled, Transport, Unmatched, BadResponse };

std::string_view to_string(BackendErrc e);
BackendErrc backend_errc_from_string(std::string_view s);  // throws std::invalid_argument
std::optional<AgentKind> agent_kind_from_string(std::string_view s);

class BackendError : public std::runtime_error {
 public:
  BackendError(BackendErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  BackendErrc code() const { return code_; }

 private:
  BackendErrc code_;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  /// Raw completion text. Throws BackendError.
  virtual std::string send(const AgentRequest& request, std::chrono::milliseconds timeout, std::stop_token stop) = 0;
};

struct ScriptEntry {
  std::optional<AgentKind> agent;
  std::string match;  // substring of the last message; empty matches anything
  std::string response;
  std::optional<BackendErrc> error;  // raised instead of responding

  friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

nlohmann::json to_json(const ScriptEntry& e);
ScriptEntry script_entry_from_json(const nlohmann::json& j);

/// Replays entries strictly in order. A send that does not match the next
/// entry, or arrives after the last one, throws BackendError(Unmatched).
class ScriptedBackend : public LlmBackend {
 public:
  explicit ScriptedBackend(std::vector<ScriptEntry> entries);

  /// {"entries": [{"agent"?, "match"?, "response" | "error"}]} where error
  /// names a BackendErrc ("timeout", "transport", ...). A response may be
  /// any JSON value, which is sent as its dump.
  static ScriptedBackend from_json(const nlohmann::json& j);
  static ScriptedBackend from_file(const std::filesystem::path& path);

  std::string send(const AgentRequest& request, std::chrono::milliseconds timeout, std::stop_token stop) override;

  std::size_t consumed() const;
  std::size_t remaining() const;
  const std::vector<ScriptEntry>& entries() const { return entries_; }

 private:
  std::vector<ScriptEntry> entries_;
  mutable std::mutex mu_;
  std::size_t next_ = 0;
};

struct LiveConfig {
  std::string url;  // base, e.g. https://host/v1; requests go to <url>/chat/completions
  std::string model;
  std::string key;

  /// PARLOGUE_LLM_URL, PARLOGUE_LLM_MODEL, PARLOGUE_LLM_KEY. Throws
  /// std::runtime_error when the url or model is unset.
  static LiveConfig from_env();
};

/// Chat-completions over HTTP(S).
class LiveBackend : public LlmBackend {
 public:
  explicit LiveBackend(LiveConfig config);
  std::string send(const AgentRequest& request, std::chrono::milliseconds timeout, std::stop_token stop) override;

 private:
  LiveConfig config_;
};

}  // namespace parlogue::agents
