#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "parlogue/compilesvc/client.hpp"
#include "parlogue/pipeline/session.hpp"

namespace parlogue::pipeline {

/// Runs submitted jobs one at a time, in order, on its own thread.
class SerialExecutor {
 public:
  SerialExecutor();
  ~SerialExecutor();
  SerialExecutor(const SerialExecutor&) = delete;
  SerialExecutor& operator=(const SerialExecutor&) = delete;

  template <class F>
  auto submit(F fn) -> std::future<decltype(fn())> {
    auto task = std::make_shared<std::packaged_task<decltype(fn())()>>(std::move(fn));
    auto fut = task->get_future();
    post([task] { (*task)(); });
    return fut;
  }

  /// Finishes queued jobs and joins. Later submits throw std::runtime_error.
  void stop();

 private:
  void post(std::function<void()> job);
  void loop();

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool stopping_ = false;
  std::thread thread_;
};

struct EngineConfig {
  std::filesystem::path data_dir;      // empty: journals stay in memory
  std::filesystem::path asset_dir = default_asset_dir();
  std::filesystem::path fixtures_dir;  // scripted fixtures, <name>.json
  compilesvc::ClientConfig compiler;
  SessionConfig defaults;
};

struct CreateOptions {
  std::string backend = "scripted";  // "scripted" | "live"
  std::string fixture;               // scripted: fixture name
  std::optional<nlohmann::json> script;  // scripted: inline {"entries":[...]}
  std::optional<std::string> model;      // live only
  std::optional<agents::FinalVariant> final_variant;
  std::optional<std::uint64_t> seed;
  std::optional<bool> review;
  std::string id;  // empty: generated
};

/// {"backend","fixture"?,"script"?,"model"?,"final_prompt_variant"?,"seed"?,
///  "review"?,"id"?}. Unknown fields are rejected. Throws std::invalid_argument.
CreateOptions create_options_from_json(const nlohmann::json& j);

/// A session with its operation queue.
class SessionHandle {
 public:
  SessionHandle(std::shared_ptr<Session> session, std::string backend, std::string fixture, std::string created);

  Session& session() { return *session_; }
  const Session& session() const { return *session_; }
  const std::string& backend() const { return backend_; }
  const std::string& fixture() const { return fixture_; }
  const std::string& created() const { return created_; }

  /// Runs `fn(session)` on the session's queue and waits for it. Exceptions
  /// propagate to the caller.
  template <class F>
  auto run(F fn) -> decltype(fn(std::declval<Session&>())) {
    return exec_.submit([this, fn = std::move(fn)]() mutable { return fn(*session_); }).get();
  }

  /// Snapshot plus the handle's own fields.
  nlohmann::json describe() const;
  void close();

 private:
  std::shared_ptr<Session> session_;
  std::string backend_;
  std::string fixture_;
  std::string created_;
  SerialExecutor exec_;
};

/// Owns every live session and the shared compile client.
class Engine {
 public:
  explicit Engine(EngineConfig config);
  ~Engine();

  /// Throws std::invalid_argument for bad options or an unknown fixture and
  /// std::runtime_error when the live backend is not configured.
  std::shared_ptr<SessionHandle> create(const CreateOptions& options);
  std::shared_ptr<SessionHandle> find(const std::string& id) const;
  std::vector<std::string> ids() const;
  /// Closes every event stream and stops every queue.
  void shutdown();

  const EngineConfig& config() const { return config_; }
  std::shared_ptr<compilesvc::CompileClient> compiler() const { return compiler_; }

 private:
  std::shared_ptr<agents::LlmBackend> make_backend(const CreateOptions& options) const;
  std::string fresh_id();

  EngineConfig config_;
  std::shared_ptr<compilesvc::CompileClient> compiler_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<SessionHandle>> sessions_;
};

/// {"entries":[...]} from a fixture document, which is either the script
/// itself or an object holding it under "script".
nlohmann::json fixture_script(const nlohmann::json& doc);

/// Builds a scripted backend from {"entries":[...]}.
std::shared_ptr<agents::ScriptedBackend> scripted_backend(const nlohmann::json& script);

bool valid_session_id(std::string_view id);

}  // namespace parlogue::pipeline
