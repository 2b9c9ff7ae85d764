#include "parlogue/pipeline/runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>

namespace parlogue::pipeline {

using nlohmann::json;
namespace ag = parlogue::agents;

SerialExecutor::SerialExecutor() : thread_([this] { loop(); }) {}

SerialExecutor::~SerialExecutor() { stop(); }

void SerialExecutor::stop() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable() && thread_.get_id() != std::this_thread::get_id()) thread_.join();
}

void SerialExecutor::post(std::function<void()> job) {
  {
    std::lock_guard lock(mu_);
    if (stopping_) throw std::runtime_error("executor stopped");
    jobs_.push_back(std::move(job));
  }
  cv_.notify_one();
}

void SerialExecutor::loop() {
  for (;;) {
    std::function<void()> job;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [&] { return stopping_ || !jobs_.empty(); });
      if (jobs_.empty()) return;
      job = std::move(jobs_.front());
      jobs_.pop_front();
    }
    job();
  }
}

CreateOptions create_options_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("session options must be an object");
  CreateOptions o;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      if (k == "backend") {
        o.backend = it->get<std::string>();
      } else if (k == "fixture") {
        o.fixture = it->get<std::string>();
      } else if (k == "script") {
        o.script = *it;
      } else if (k == "model") {
        o.model = it->get<std::string>();
      } else if (k == "final_prompt_variant") {
        o.final_variant = ag::final_variant_from_string(it->get<std::string>());
      } else if (k == "seed") {
        o.seed = it->get<std::uint64_t>();
      } else if (k == "review") {
        o.review = it->get<bool>();
      } else if (k == "id") {
        o.id = it->get<std::string>();
      } else {
        throw std::invalid_argument("unknown field '" + k + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad session options: ") + e.what());
  }
  return o;
}

SessionHandle::SessionHandle(std::shared_ptr<Session> session, std::string backend, std::string fixture,
                             std::string created)
    : session_(std::move(session)),
      backend_(std::move(backend)),
      fixture_(std::move(fixture)),
      created_(std::move(created)) {}

json SessionHandle::describe() const {
  auto j = session_->snapshot();
  j["backend"] = backend_;
  j["created"] = created_;
  if (!fixture_.empty()) j["fixture"] = fixture_;
  return j;
}

void SessionHandle::close() {
  session_->cancel();
  session_->events().close();
  exec_.stop();
}

json fixture_script(const json& doc) {
  if (doc.is_object() && doc.contains("script")) return doc.at("script");
  return doc;
}

std::shared_ptr<ag::ScriptedBackend> scripted_backend(const json& script) {
  if (!script.is_object() || !script.contains("entries") || !script.at("entries").is_array()) {
    throw std::invalid_argument("script must be {\"entries\": [...]}");
  }
  std::vector<ag::ScriptEntry> entries;
  try {
    for (const auto& e : script.at("entries")) entries.push_back(ag::script_entry_from_json(e));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad script entry: ") + e.what());
  }
  return std::make_shared<ag::ScriptedBackend>(std::move(entries));
}

bool valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

namespace {

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Engine::Engine(EngineConfig config)
    : config_(std::move(config)), compiler_(std::make_shared<compilesvc::CompileClient>(config_.compiler)) {
  config_.defaults.asset_dir = config_.asset_dir;
}

Engine::~Engine() { shutdown(); }

std::shared_ptr<ag::LlmBackend> Engine::make_backend(const CreateOptions& o) const {
  if (o.backend == "scripted") {
    if (o.model) throw std::invalid_argument("model applies to the live backend only");
    if (o.script && !o.fixture.empty()) throw std::invalid_argument("give either a fixture or a script");
    if (o.script) return scripted_backend(*o.script);
    if (o.fixture.empty()) throw std::invalid_argument("a scripted session needs a fixture");
    if (!valid_session_id(o.fixture)) throw std::invalid_argument("bad fixture name '" + o.fixture + "'");
    auto path = config_.fixtures_dir / (o.fixture + ".json");
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("unknown fixture '" + o.fixture + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw std::invalid_argument("fixture '" + o.fixture + "' is not valid JSON: " + e.what());
    }
    return scripted_backend(fixture_script(doc));
  }
  if (o.backend == "live") {
    if (!o.fixture.empty() || o.script) throw std::invalid_argument("fixtures apply to the scripted backend only");
    auto live = ag::LiveConfig::from_env();
    if (o.model) live.model = *o.model;
    return std::make_shared<ag::LiveBackend>(std::move(live));
  }
  throw std::invalid_argument("unknown backend '" + o.backend + "'");
}

std::string Engine::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    std::string id(buf, 12);
    if (!sessions_.count(id)) return id;
  }
}

std::shared_ptr<SessionHandle> Engine::create(const CreateOptions& o) {
  auto backend = make_backend(o);
  SessionConfig cfg = config_.defaults;
  if (o.final_variant) cfg.final_variant = *o.final_variant;
  if (o.seed) cfg.seed = *o.seed;
  if (o.review) cfg.review = *o.review;

  std::lock_guard lock(mu_);
  std::string id = o.id;
  if (id.empty()) {
    id = fresh_id();
  } else if (!valid_session_id(id)) {
    throw std::invalid_argument("bad session id '" + id + "'");
  } else if (sessions_.count(id)) {
    throw std::invalid_argument("session '" + id + "' exists");
  }
  std::shared_ptr<Journal> journal;
  if (config_.data_dir.empty()) {
    journal = std::make_shared<Journal>();
  } else {
    journal = std::make_shared<Journal>(config_.data_dir / id / "journal.jsonl");
  }
  std::string label = o.backend == "scripted" ? "scripted" : "live";
  auto session = std::make_shared<Session>(id, cfg, std::move(backend), compiler_, std::move(journal), label);
  auto handle = std::make_shared<SessionHandle>(std::move(session), label, o.fixture, utc_now());
  sessions_.emplace(id, handle);
  return handle;
}

std::shared_ptr<SessionHandle> Engine::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> Engine::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, h] : sessions_) out.push_back(id);
  return out;
}

void Engine::shutdown() {
  std::map<std::string, std::shared_ptr<SessionHandle>> all;
  {
    std::lock_guard lock(mu_);
    all.swap(sessions_);
  }
  for (auto& [id, h] : all) h->close();
}

}  // namespace parlogue::pipeline
