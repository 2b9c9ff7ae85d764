#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parlogue/agents/backend.hpp"
#include "parlogue/agents/envelope.hpp"
#include "parlogue/agents/prompt.hpp"
#include "parlogue/compilesvc/client.hpp"
#include "parlogue/geometry/registry.hpp"
#include "parlogue/geometry/tessellate.hpp"
#include "parlogue/params/params.hpp"
#include "parlogue/pdl/ast.hpp"
#include "parlogue/pdl/interpreter.hpp"
#include "parlogue/pdl/registry.hpp"
#include "parlogue/pipeline/events.hpp"
#include "parlogue/pipeline/journal.hpp"

namespace parlogue::pipeline {

inline constexpr int kTessellationResolution = 32;

std::filesystem::path default_asset_dir();

struct SessionConfig {
  agents::FinalVariant final_variant = agents::FinalVariant::Strict;
  int max_retries = 2;        // extra attempts after a malformed agent reply
  int max_review_rounds = 2;
  bool review = true;         // run the optimization agent before compiling
  std::chrono::milliseconds agent_timeout{60'000};
  std::uint64_t seed = 0;     // evaluation seed, fixed for the session
  std::filesystem::path asset_dir = default_asset_dir();
};

/// Journal form; the asset directory is not recorded.
nlohmann::json to_json(const SessionConfig& c);
SessionConfig session_config_from_json(const nlohmann::json& j, SessionConfig base = {});

struct Counters {
  std::uint64_t agent_calls = 0;
  std::uint64_t registrations = 0;  // method batches linked into the registry
  std::uint64_t evaluations = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

nlohmann::json to_json(const Counters& c);

struct DesignArtifact {
  std::uint64_t generation = 0;
  pdl::Program program;
  std::string source;  // reached method sources, then the program, canonical
  std::vector<std::string> method_keys;
  pdl::EvalResult result;
  std::vector<geometry::TriMesh> meshes;  // one per emitted shape
  std::uint64_t seed = 0;
  params::ParamSet params;
  std::string digest;  // geometry::mesh_digest(meshes)
};

/// {"generation","digest","seed","params","source","method_keys","meshes"}
nlohmann::json artifact_json(const DesignArtifact& a);
std::string artifact_obj(const DesignArtifact& a);

/// A parameter update, or a scene point to create and bind to the
/// parameter as its reference.
struct UpdateRequest {
  params::ParamUpdate update;
  std::optional<geometry::Vec3> point;

  friend bool operator==(const UpdateRequest&, const UpdateRequest&) = default;
};

/// ParamUpdate JSON, or {"name","point":[x,y,z],"source"?}.
/// Throws params::ParamError(InvalidSpec).
UpdateRequest update_request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const UpdateRequest& u);

/// Operation not allowed in the current state.
class IllegalState : public std::runtime_error {
 public:
  IllegalState(SessionState state, const std::string& op)
      : std::runtime_error(op + " is not allowed while " + std::string(to_string(state))), state_(state) {}
  SessionState state() const { return state_; }

 private:
  SessionState state_;
};

class UnknownProposal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One design session. Operations must come from a single thread at a time
/// (the runner's executor); the read accessors are safe from any thread.
class Session {
 public:
  Session(std::string id, SessionConfig config, std::shared_ptr<agents::LlmBackend> backend,
          std::shared_ptr<compilesvc::CompileClient> compiler, std::shared_ptr<Journal> journal = nullptr,
          std::string backend_label = "scripted");
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// User message. Allowed in Gathering, Live and Failed (which returns to
  /// Gathering first). Throws IllegalState.
  std::vector<SessionEvent> advance(std::string_view text, const std::vector<UpdateRequest>& updates = {});

  /// Live only: one evaluation of the existing program, nothing else.
  /// Throws IllegalState.
  std::vector<SessionEvent> update_parameter(const UpdateRequest& update);

  /// Accepts or drops the reasoner's pending change to a parameter the user
  /// set. Throws UnknownProposal.
  std::vector<SessionEvent> confirm(std::string_view name, bool accept);

  /// Aborts an in-flight agent call.
  void cancel();

  const std::string& id() const { return id_; }
  const SessionConfig& config() const { return config_; }
  SessionState state() const;
  std::shared_ptr<const DesignArtifact> artifact() const;
  Counters counters() const;
  params::ParamSet params() const;
  std::vector<agents::ChatTurn> transcript() const;
  std::vector<std::string> registered_methods() const;
  std::map<std::string, params::ParamSpec> proposals() const;
  /// {"id","state","seed","config","params","proposals","transcript",
  ///  "methods","artifact","counters","last_seq"}
  nlohmann::json snapshot() const;

  const EventLog& events() const { return events_; }
  EventLog& events() { return events_; }
  Journal& journal() { return *journal_; }

 private:
  class Recorder;
  using Events = std::vector<SessionEvent>;

  void emit(EventKind kind, nlohmann::json data, Events& out);
  void set_state(SessionState to, Events& out);
  void fail(ErrorStage stage, const std::string& message, const std::vector<pdl::Diagnostic>& diags, Events& out);
  void add_turn(agents::Speaker speaker, std::string text, std::optional<nlohmann::json> payload);
  void params_changed(const std::vector<std::string>& changed, Events& out);
  std::vector<agents::ChatMessage> history() const;

  std::optional<agents::RaResponse> ask_reasoner(Events& out);
  std::optional<agents::CaOutput> ask_coder(Events& out);
  void apply_reasoner_params(const agents::RaResponse& r, Events& out);
  void generate(Events& out);
  /// Resolves a point request into a reference and applies it to `set`.
  void apply_request(const UpdateRequest& req, params::ParamSet& set);
  std::shared_ptr<const DesignArtifact> build_artifact(const pdl::Program& program, const params::ParamSet& set,
                                                       pdl::EvalResult result);
  bool reevaluate(const params::ParamSet& set, Events& out);

  std::string id_;
  SessionConfig config_;
  std::shared_ptr<agents::LlmBackend> backend_;
  std::unique_ptr<Recorder> recorder_;
  std::shared_ptr<compilesvc::CompileClient> compiler_;
  std::shared_ptr<Journal> journal_;
  EventLog events_;
  agents::PromptTemplate reasoner_tmpl_;
  agents::PromptTemplate coder_tmpl_;
  agents::PromptTemplate optimizer_tmpl_;
  std::stop_source stop_;
  std::string design_intent_;
  std::set<std::string> user_set_;  // parameters whose value came from the user

  // Written by the operation thread under mu_, read by anyone under mu_.
  mutable std::mutex mu_;
  SessionState state_ = SessionState::Gathering;
  params::ParamSet params_;
  std::map<std::string, params::ParamSpec> proposals_;
  std::vector<agents::ChatTurn> transcript_;
  pdl::MethodRegistry registry_;
  geometry::ShapeRegistry shapes_;
  std::shared_ptr<const DesignArtifact> artifact_;
  Counters counters_;
};

}  // namespace parlogue::pipeline
