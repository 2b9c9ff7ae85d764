#include "parlogue/pipeline/events.hpp"

namespace parlogue::pipeline {

using nlohmann::json;

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::Gathering: return "gathering";
    case SessionState::Generating: return "generating";
    case SessionState::Reviewing: return "reviewing";
    case SessionState::Compiling: return "compiling";
    case SessionState::Live: return "live";
    case SessionState::Failed: return "failed";
  }
  return "?";
}

SessionState session_state_from_string(std::string_view s) {
  for (auto v : {SessionState::Gathering, SessionState::Generating, SessionState::Reviewing, SessionState::Compiling,
                 SessionState::Live, SessionState::Failed}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown session state '" + std::string(s) + "'");
}

bool legal_transition(SessionState from, SessionState to) {
  using S = SessionState;
  switch (from) {
    case S::Gathering: return to == S::Generating;
    case S::Generating: return to == S::Reviewing || to == S::Failed;
    case S::Reviewing: return to == S::Compiling || to == S::Failed;
    case S::Compiling: return to == S::Live || to == S::Failed;
    case S::Live: return to == S::Generating;
    case S::Failed: return to == S::Gathering;
  }
  return false;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::AgentText: return "agent_text";
    case EventKind::ParamsChanged: return "params_changed";
    case EventKind::StateChanged: return "state_changed";
    case EventKind::ArtifactUpdated: return "artifact_updated";
    case EventKind::Error: return "error";
  }
  return "?";
}

EventKind event_kind_from_string(std::string_view s) {
  for (auto v : {EventKind::AgentText, EventKind::ParamsChanged, EventKind::StateChanged, EventKind::ArtifactUpdated,
                 EventKind::Error}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown event kind '" + std::string(s) + "'");
}

std::string_view to_string(ErrorStage s) {
  switch (s) {
    case ErrorStage::Dialogue: return "dialogue";
    case ErrorStage::Params: return "params";
    case ErrorStage::Generation: return "generation";
    case ErrorStage::Review: return "review";
    case ErrorStage::MethodCompile: return "method_compile";
    case ErrorStage::LogicCompile: return "logic_compile";
    case ErrorStage::Runtime: return "runtime";
  }
  return "?";
}

json to_json(const SessionEvent& e) {
  return json{{"session", e.session}, {"seq", e.seq}, {"kind", to_string(e.kind)}, {"data", e.data}};
}

SessionEvent event_from_json(const json& j) {
  SessionEvent e;
  e.session = j.at("session").get<std::string>();
  e.seq = j.at("seq").get<std::uint64_t>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.data = j.at("data");
  return e;
}

SessionEvent EventLog::append(EventKind kind, json data) {
  std::lock_guard lock(mu_);
  SessionEvent e{session_, events_.size() + 1, kind, std::move(data)};
  events_.push_back(e);
  cv_.notify_all();
  return e;
}

std::vector<SessionEvent> EventLog::since(std::uint64_t from) const {
  std::lock_guard lock(mu_);
  std::size_t start = from == 0 ? 0 : from - 1;
  if (start >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(start), events_.end()};
}

std::vector<SessionEvent> EventLog::wait_since(std::uint64_t from, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  std::size_t start = from == 0 ? 0 : from - 1;
  cv_.wait_for(lock, timeout, [&] { return closed_ || events_.size() > start; });
  if (start >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(start), events_.end()};
}

std::uint64_t EventLog::last_seq() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

void EventLog::close() {
  std::lock_guard lock(mu_);
  closed_ = true;
  cv_.notify_all();
}

bool EventLog::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

}  // namespace parlogue::pipeline
