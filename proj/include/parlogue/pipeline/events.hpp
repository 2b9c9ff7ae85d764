#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace parlogue::pipeline {

enum class SessionState { Gathering, Generating, Reviewing, Compiling, Live, Failed };

std::string_view to_string(SessionState s);
SessionState session_state_from_string(std::string_view s);  // throws std::invalid_argument

/// Gathering->Generating->Reviewing->Compiling->Live, any of the three
/// middle states -> Failed, Live->Generating, Failed->Gathering.
bool legal_transition(SessionState from, SessionState to);

enum class EventKind { AgentText, ParamsChanged, StateChanged, ArtifactUpdated, Error };

std::string_view to_string(EventKind k);
EventKind event_kind_from_string(std::string_view s);

/// Where an Error event came from.
enum class ErrorStage { Dialogue, Params, Generation, Review, MethodCompile, LogicCompile, Runtime };

std::string_view to_string(ErrorStage s);

struct SessionEvent {
  std::string session;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::AgentText;
  nlohmann::json data;

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

// {"session","seq","kind","data"}
nlohmann::json to_json(const SessionEvent& e);
SessionEvent event_from_json(const nlohmann::json& j);

/// Append-only event history of one session with blocking reads for
/// stream consumers. Sequence numbers start at 1.
class EventLog {
 public:
  explicit EventLog(std::string session) : session_(std::move(session)) {}

  SessionEvent append(EventKind kind, nlohmann::json data);
  /// Events with seq >= from.
  std::vector<SessionEvent> since(std::uint64_t from) const;
  /// Like since(), but waits up to `timeout` while there is nothing new.
  /// Returns early with nothing once closed.
  std::vector<SessionEvent> wait_since(std::uint64_t from, std::chrono::milliseconds timeout) const;
  std::uint64_t last_seq() const;
  /// Wakes every waiter; later waits return immediately.
  void close();
  bool closed() const;

 private:
  std::string session_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::vector<SessionEvent> events_;
  bool closed_ = false;
};

}  // namespace parlogue::pipeline
