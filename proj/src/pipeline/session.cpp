#include "parlogue/pipeline/session.hpp"

#include <algorithm>
#include <cstdlib>

#include "parlogue/agents/review.hpp"
#include "parlogue/compilesvc/compiler.hpp"
#include "parlogue/geometry/error.hpp"
#include "parlogue/geometry/mesh_io.hpp"
#include "parlogue/pdl/format.hpp"
#include "parlogue/pdl/parser.hpp"

namespace parlogue::pipeline {

using nlohmann::json;
namespace ag = parlogue::agents;

std::filesystem::path default_asset_dir() {
  if (const char* env = std::getenv("PARLOGUE_ASSET_DIR"); env && *env) return env;
  return PARLOGUE_DEFAULT_ASSET_DIR;
}

json to_json(const SessionConfig& c) {
  return json{{"final_prompt_variant", ag::to_string(c.final_variant)},
              {"max_retries", c.max_retries},
              {"max_review_rounds", c.max_review_rounds},
              {"review", c.review},
              {"agent_timeout_ms", c.agent_timeout.count()},
              {"seed", c.seed}};
}

SessionConfig session_config_from_json(const json& j, SessionConfig base) {
  if (j.contains("final_prompt_variant")) {
    base.final_variant = ag::final_variant_from_string(j.at("final_prompt_variant").get<std::string>());
  }
  if (j.contains("max_retries")) base.max_retries = j.at("max_retries").get<int>();
  if (j.contains("max_review_rounds")) base.max_review_rounds = j.at("max_review_rounds").get<int>();
  if (j.contains("review")) base.review = j.at("review").get<bool>();
  if (j.contains("agent_timeout_ms")) base.agent_timeout = std::chrono::milliseconds(j.at("agent_timeout_ms").get<long>());
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  return base;
}

json to_json(const Counters& c) {
  return json{{"agent_calls", c.agent_calls}, {"registrations", c.registrations}, {"evaluations", c.evaluations}};
}

json artifact_json(const DesignArtifact& a) {
  json meshes = json::array();
  for (const auto& m : a.meshes) meshes.push_back(geometry::to_json(m));
  return json{{"generation", a.generation}, {"digest", a.digest},       {"seed", a.seed},
              {"params", params::to_json(a.params)}, {"source", a.source}, {"method_keys", a.method_keys},
              {"meshes", meshes}};
}

std::string artifact_obj(const DesignArtifact& a) { return geometry::to_obj(a.meshes); }

UpdateRequest update_request_from_json(const json& j) {
  if (!j.is_object() || !j.contains("point")) return {params::update_from_json(j), std::nullopt};
  json rest = j;
  rest.erase("point");
  const auto& p = j.at("point");
  if (!p.is_array() || p.size() != 3 || !std::all_of(p.begin(), p.end(), [](const json& v) { return v.is_number(); })) {
    throw params::ParamError(params::ParamErrc::InvalidSpec, "point must be [x, y, z]");
  }
  if (rest.contains("value") || rest.contains("ref")) {
    throw params::ParamError(params::ParamErrc::InvalidSpec, "point excludes value and ref");
  }
  // Parse the remaining fields through the ordinary form with a placeholder ref.
  rest["ref"] = 0;
  auto u = params::update_from_json(rest);
  u.ref.reset();
  return {u, geometry::Vec3{p[0].get<double>(), p[1].get<double>(), p[2].get<double>()}};
}

json to_json(const UpdateRequest& u) {
  if (!u.point) return params::to_json(u.update);
  auto j = params::to_json(u.update);
  j.erase("ref");
  j["point"] = {u.point->x, u.point->y, u.point->z};
  return j;
}

// Counts and journals every backend call before passing it on.
class Session::Recorder : public ag::LlmBackend {
 public:
  explicit Recorder(Session& s) : s_(s) {}

  std::string send(const ag::AgentRequest& request, std::chrono::milliseconds timeout, std::stop_token stop) override {
    {
      std::lock_guard lock(s_.mu_);
      ++s_.counters_.agent_calls;
    }
    json rec{{"type", record::kAgentCall}, {"agent", ag::to_string(request.agent)}};
    try {
      auto raw = s_.backend_->send(request, timeout, stop);
      rec["response"] = raw;
      s_.journal_->append(std::move(rec));
      return raw;
    } catch (const ag::BackendError& e) {
      rec["error"] = ag::to_string(e.code());
      rec["message"] = e.what();
      s_.journal_->append(std::move(rec));
      throw;
    }
  }

 private:
  Session& s_;
};

Session::Session(std::string id, SessionConfig config, std::shared_ptr<ag::LlmBackend> backend,
                 std::shared_ptr<compilesvc::CompileClient> compiler, std::shared_ptr<Journal> journal,
                 std::string backend_label)
    : id_(std::move(id)),
      config_(std::move(config)),
      backend_(std::move(backend)),
      recorder_(std::make_unique<Recorder>(*this)),
      compiler_(compiler ? std::move(compiler) : std::make_shared<compilesvc::CompileClient>()),
      journal_(journal ? std::move(journal) : std::make_shared<Journal>()),
      events_(id_),
      reasoner_tmpl_(ag::load_template(config_.asset_dir, ag::AgentKind::Reasoner, config_.final_variant)),
      coder_tmpl_(ag::load_template(config_.asset_dir, ag::AgentKind::Coder)),
      optimizer_tmpl_(ag::load_template(config_.asset_dir, ag::AgentKind::Optimizer)) {
  if (config_.max_retries < 0 || config_.max_review_rounds < 1) {
    throw std::invalid_argument("max_retries must be >= 0 and max_review_rounds >= 1");
  }
  journal_->append(json{{"type", record::kSessionCreated},
                        {"schema_version", kJournalSchemaVersion},
                        {"session", id_},
                        {"backend", backend_label},
                        {"config", to_json(config_)}});
}

Session::~Session() = default;

// ---- read side ----

SessionState Session::state() const {
  std::lock_guard lock(mu_);
  return state_;
}

std::shared_ptr<const DesignArtifact> Session::artifact() const {
  std::lock_guard lock(mu_);
  return artifact_;
}

Counters Session::counters() const {
  std::lock_guard lock(mu_);
  return counters_;
}

params::ParamSet Session::params() const {
  std::lock_guard lock(mu_);
  return params_;
}

std::vector<ag::ChatTurn> Session::transcript() const {
  std::lock_guard lock(mu_);
  return transcript_;
}

std::vector<std::string> Session::registered_methods() const {
  std::lock_guard lock(mu_);
  return registry_.names();
}

std::map<std::string, params::ParamSpec> Session::proposals() const {
  std::lock_guard lock(mu_);
  return proposals_;
}

namespace {

json proposals_json(const std::map<std::string, params::ParamSpec>& proposals) {
  json arr = json::array();
  for (const auto& [name, spec] : proposals) arr.push_back(params::to_json(spec));
  return arr;
}

json artifact_summary(const std::shared_ptr<const DesignArtifact>& a) {
  if (!a) return nullptr;
  return json{{"generation", a->generation}, {"digest", a->digest}, {"shapes", a->meshes.size()}};
}

json diag_for(const params::ParamError& e) {
  return pdl::to_json(pdl::Diagnostic{pdl::Severity::Error, std::string(params::to_string(e.code())), e.what(), {}});
}

}  // namespace

json Session::snapshot() const {
  std::lock_guard lock(mu_);
  json turns = json::array();
  for (const auto& t : transcript_) turns.push_back(ag::to_json(t));
  return json{{"id", id_},
              {"state", to_string(state_)},
              {"seed", config_.seed},
              {"config", to_json(config_)},
              {"params", params::to_json(params_)},
              {"proposals", proposals_json(proposals_)},
              {"transcript", turns},
              {"methods", registry_.names()},
              {"artifact", artifact_summary(artifact_)},
              {"counters", to_json(counters_)},
              {"last_seq", events_.last_seq()}};
}

void Session::cancel() { stop_.request_stop(); }

// ---- helpers ----

void Session::emit(EventKind kind, json data, Events& out) {
  auto e = events_.append(kind, std::move(data));
  journal_->append(json{{"type", record::kEvent}, {"event", to_json(e)}});
  out.push_back(std::move(e));
}

void Session::set_state(SessionState to, Events& out) {
  SessionState from = state_;
  if (!legal_transition(from, to)) {
    throw std::logic_error("illegal transition " + std::string(to_string(from)) + " -> " + std::string(to_string(to)));
  }
  {
    std::lock_guard lock(mu_);
    state_ = to;
  }
  emit(EventKind::StateChanged, json{{"from", to_string(from)}, {"to", to_string(to)}}, out);
}

void Session::fail(ErrorStage stage, const std::string& message, const std::vector<pdl::Diagnostic>& diags,
                   Events& out) {
  emit(EventKind::Error, json{{"stage", to_string(stage)}, {"message", message}, {"diagnostics", pdl::to_json(diags)}},
       out);
}

void Session::add_turn(ag::Speaker speaker, std::string text, std::optional<json> payload) {
  ag::ChatTurn turn{speaker, std::move(text), std::move(payload), 0};
  {
    std::lock_guard lock(mu_);
    turn.seq = transcript_.size();
    transcript_.push_back(turn);
  }
  journal_->append(json{{"type", record::kTurn}, {"turn", ag::to_json(turn)}});
}

void Session::params_changed(const std::vector<std::string>& changed, Events& out) {
  emit(EventKind::ParamsChanged,
       json{{"params", params::to_json(params_)}, {"changed", changed}, {"proposals", proposals_json(proposals_)}}, out);
}

std::vector<ag::ChatMessage> Session::history() const {
  std::vector<ag::ChatMessage> msgs;
  for (const auto& t : transcript_) {
    switch (t.speaker) {
      case ag::Speaker::User: {
        std::vector<params::ParamUpdate> ups;
        if (t.payload && t.payload->contains("updates")) {
          for (const auto& u : t.payload->at("updates")) {
            auto req = update_request_from_json(u);
            ups.push_back(req.update);
          }
        }
        msgs.push_back({"user", ag::wrap_user_input(t.text, ups)});
        break;
      }
      case ag::Speaker::Reasoner:
        msgs.push_back({"assistant", t.payload ? t.payload->dump() : t.text});
        break;
      case ag::Speaker::System:
        msgs.push_back({"system", t.text});
        break;
    }
  }
  return msgs;
}

void Session::apply_request(const UpdateRequest& req, params::ParamSet& set) {
  auto u = req.update;
  if (req.point) {
    std::lock_guard lock(mu_);
    u.ref = shapes_.add(geometry::make_point(*req.point));
  }
  set.apply_update(u, shapes_);
}

// ---- agents ----

std::optional<ag::RaResponse> Session::ask_reasoner(Events& out) {
  ag::AgentRequest req{ag::AgentKind::Reasoner,
                       ag::render_prompt(reasoner_tmpl_, {{"session_parameters", params::to_json(params_).dump(2)}}),
                       history()};
  for (int attempt = 0;; ++attempt) {
    std::string raw;
    try {
      raw = recorder_->send(req, config_.agent_timeout, stop_.get_token());
    } catch (const ag::BackendError& e) {
      fail(ErrorStage::Dialogue, std::string("reasoning agent unavailable: ") + e.what(),
           {pdl::error(pdl::code::kTransport, e.what())}, out);
      return std::nullopt;
    }
    try {
      return ag::parse_ra_response(raw);
    } catch (const ag::ProtocolError& e) {
      std::string note = std::string("Your last reply was rejected (") + e.what() +
                         "). Reply with exactly one JSON object with the fields type, text and parameters.";
      add_turn(ag::Speaker::System, note, json{{"protocol_error", ag::to_string(e.reason())}});
      if (attempt >= config_.max_retries) {
        fail(ErrorStage::Dialogue,
             "reasoning agent reply rejected after " + std::to_string(attempt + 1) + " attempts: " + e.what(),
             {pdl::error(pdl::code::kProtocol, e.what())}, out);
        return std::nullopt;
      }
      req.messages.push_back({"assistant", raw});
      req.messages.push_back({"system", note});
    }
  }
}

std::optional<ag::CaOutput> Session::ask_coder(Events& out) {
  ag::PromptContext ctx{{"design_intent", design_intent_},
                        {"session_parameters", params::to_json(params_).dump(2)},
                        {"library", ag::library_listing(registry_)}};
  ag::AgentRequest req{ag::AgentKind::Coder, ag::render_prompt(coder_tmpl_, ctx), {{"user", design_intent_}}};
  for (int attempt = 0;; ++attempt) {
    std::string raw;
    try {
      raw = recorder_->send(req, config_.agent_timeout, stop_.get_token());
    } catch (const ag::BackendError& e) {
      fail(ErrorStage::Generation, std::string("coding agent unavailable: ") + e.what(),
           {pdl::error(pdl::code::kTransport, e.what())}, out);
      return std::nullopt;
    }
    try {
      return ag::parse_ca_output(raw);
    } catch (const ag::ProtocolError& e) {
      if (attempt >= config_.max_retries) {
        fail(ErrorStage::Generation,
             "coding agent reply rejected after " + std::to_string(attempt + 1) + " attempts: " + e.what(),
             {pdl::error(pdl::code::kProtocol, e.what())}, out);
        return std::nullopt;
      }
      req.messages.push_back({"assistant", raw});
      req.messages.push_back({"system", std::string("Your last reply was rejected (") + e.what() +
                                            "). Reply with one JSON object with the keys Name, Description, "
                                            "Dependency, Method_New and Logic."});
    }
  }
}

void Session::apply_reasoner_params(const ag::RaResponse& r, Events& out) {
  std::vector<std::string> changed;
  bool proposals_touched = false;
  params::ParamSet next = params_;
  auto props = proposals_;
  for (const auto& spec : r.parameters) {
    try {
      const auto* cur = next.find(spec.name);
      if (cur == nullptr) {
        next.declare(spec);
      } else if (cur->kind == spec.kind && cur->range == spec.range && cur->default_value == spec.default_value) {
        continue;
      } else if (cur->status == params::ParamStatus::Confirmed && user_set_.count(spec.name)) {
        props[spec.name] = spec;
        proposals_touched = true;
        continue;
      } else {
        next.redefine(spec);
      }
      changed.push_back(spec.name);
    } catch (const params::ParamError& e) {
      fail(ErrorStage::Dialogue, "parameter '" + spec.name + "' from the reasoning agent was not applied: " + e.what(),
           {pdl::Diagnostic{pdl::Severity::Error, std::string(params::to_string(e.code())), e.what(), {}}}, out);
    }
  }
  if (changed.empty() && !proposals_touched) return;
  {
    std::lock_guard lock(mu_);
    params_ = std::move(next);
    proposals_ = std::move(props);
  }
  params_changed(changed, out);
}

// ---- operations ----

std::vector<SessionEvent> Session::advance(std::string_view text, const std::vector<UpdateRequest>& updates) {
  if (state_ != SessionState::Gathering && state_ != SessionState::Live && state_ != SessionState::Failed) {
    throw IllegalState(state_, "a message");
  }
  json ups = json::array();
  for (const auto& u : updates) ups.push_back(to_json(u));
  journal_->append(json{{"type", record::kInput}, {"op", "message"}, {"text", text}, {"updates", ups}});

  Events out;
  if (state_ == SessionState::Failed) set_state(SessionState::Gathering, out);

  if (!updates.empty()) {
    params::ParamSet next = params_;
    std::vector<std::string> names;
    try {
      for (const auto& u : updates) {
        apply_request(u, next);
        names.push_back(u.update.name);
      }
    } catch (const params::ParamError& e) {
      emit(EventKind::Error,
           json{{"stage", to_string(ErrorStage::Params)}, {"message", e.what()}, {"diagnostics", json::array({diag_for(e)})}},
           out);
      return out;
    }
    {
      std::lock_guard lock(mu_);
      params_ = std::move(next);
      for (const auto& n : names) {
        user_set_.insert(n);
        proposals_.erase(n);
      }
    }
    params_changed(names, out);
  }
  add_turn(ag::Speaker::User, std::string(text), json{{"updates", ups}});

  auto r = ask_reasoner(out);
  if (!r) return out;
  journal_->append(json{{"type", record::kRaResponse}, {"response", ag::to_json(*r)}});
  add_turn(ag::Speaker::Reasoner, r->text, ag::to_json(*r));
  emit(EventKind::AgentText, json{{"speaker", "reasoner"}, {"type", ag::to_string(r->type)}, {"text", r->text}}, out);
  apply_reasoner_params(*r, out);

  if (r->type != ag::RaType::Final) return out;
  auto complete = params_.validate_complete();
  if (!complete.confirmed()) {
    std::string msg = "Waiting for values before generating: ";
    for (std::size_t i = 0; i < complete.missing.size(); ++i) msg += (i ? ", " : "") + complete.missing[i];
    add_turn(ag::Speaker::System, msg, json{{"missing", complete.missing}});
    emit(EventKind::AgentText, json{{"speaker", "system"}, {"text", msg}, {"missing", complete.missing}}, out);
    return out;
  }
  design_intent_ = r->text;
  journal_->append(json{{"type", record::kDesign}, {"intent", design_intent_}, {"params", params::to_json(params_)}});
  set_state(SessionState::Generating, out);
  generate(out);
  return out;
}

void Session::generate(Events& out) {
  auto candidate = ask_coder(out);
  if (!candidate) {
    set_state(SessionState::Failed, out);
    return;
  }
  journal_->append(json{{"type", record::kCaOutput}, {"output", ag::to_json(*candidate)}});
  set_state(SessionState::Reviewing, out);

  if (config_.review) {
    ag::ReviewOptions opt{config_.max_review_rounds, config_.agent_timeout, stop_.get_token()};
    auto verdict = ag::run_oa_review(*candidate, registry_, params_, *recorder_, optimizer_tmpl_, opt);
    journal_->append(json{{"type", record::kVerdict}, {"verdict", ag::to_json(verdict)}});
    if (verdict.status == ag::VerdictStatus::Rejected) {
      fail(ErrorStage::Review, "the program did not pass review", verdict.diagnostics, out);
      set_state(SessionState::Failed, out);
      return;
    }
    if (verdict.status == ag::VerdictStatus::Revised) candidate = *verdict.revised_output;
  }
  set_state(SessionState::Compiling, out);

  // Phase one: methods.
  std::vector<pdl::MethodDef> methods;
  for (const auto& src : candidate->method_new) {
    auto parsed = pdl::parse_methods(src);
    if (!parsed.ok()) {
      fail(ErrorStage::MethodCompile, "a method does not parse", parsed.diagnostics, out);
      set_state(SessionState::Failed, out);
      return;
    }
    for (auto& m : *parsed.value) methods.push_back(std::move(m));
  }
  if (!methods.empty()) {
    pdl::MethodRegistry working = registry_;
    auto batch = compiler_->compile_methods(methods, working);
    if (!batch.ok()) {
      fail(ErrorStage::MethodCompile, "methods failed to compile", batch.diagnostics, out);
      set_state(SessionState::Failed, out);
      return;
    }
    std::lock_guard lock(mu_);
    registry_ = std::move(working);
    ++counters_.registrations;
  }

  // Phase two: logic against the registry.
  auto resp = compiler_->compile_logic(candidate->logic, registry_, params_);
  if (!resp.ok()) {
    fail(ErrorStage::LogicCompile, "logic failed to compile", resp.diagnostics, out);
    set_state(SessionState::Failed, out);
    return;
  }
  auto program = pdl::parse(candidate->logic);
  if (!program.ok()) {
    fail(ErrorStage::LogicCompile, "logic failed to compile", program.diagnostics, out);
    set_state(SessionState::Failed, out);
    return;
  }

  pdl::EvalOutcome outcome;
  {
    std::lock_guard lock(mu_);
    ++counters_.evaluations;
  }
  outcome = pdl::evaluate(*program.value, params_, registry_, shapes_, config_.seed);
  if (!outcome.ok()) {
    fail(ErrorStage::Runtime, "evaluation failed", outcome.diagnostics, out);
    set_state(SessionState::Failed, out);
    return;
  }
  std::shared_ptr<const DesignArtifact> art;
  try {
    art = build_artifact(*program.value, params_, std::move(*outcome.result));
  } catch (const geometry::GeometryError& e) {
    fail(ErrorStage::Runtime, "tessellation failed", {pdl::error(pdl::code::kRuntimeDomain, e.what())}, out);
    set_state(SessionState::Failed, out);
    return;
  }
  {
    std::lock_guard lock(mu_);
    artifact_ = art;
  }
  set_state(SessionState::Live, out);
  emit(EventKind::ArtifactUpdated, artifact_summary(art), out);
}

std::shared_ptr<const DesignArtifact> Session::build_artifact(const pdl::Program& program, const params::ParamSet& set,
                                                              pdl::EvalResult result) {
  auto art = std::make_shared<DesignArtifact>();
  art->generation = artifact_ ? artifact_->generation + 1 : 1;
  art->program = program;
  std::vector<std::string> callees;
  if (program.logic) callees = pdl::called_methods(*program.logic);
  for (const auto& m : program.methods) {
    auto more = pdl::called_methods(m.body);
    callees.insert(callees.end(), more.begin(), more.end());
  }
  art->method_keys = compilesvc::dependency_closure(registry_, callees);
  std::vector<const pdl::RegisteredMethod*> used;
  for (const auto& k : art->method_keys) used.push_back(registry_.find_by_key(k));
  std::sort(used.begin(), used.end(), [](const auto* a, const auto* b) { return a->def->name < b->def->name; });
  for (const auto* m : used) art->source += m->source + "\n";
  art->source += pdl::format(program);
  for (const auto& shape : result.shapes) {
    auto mesh = geometry::tessellate(shape, kTessellationResolution);
    mesh.generation = art->generation;
    art->meshes.push_back(std::move(mesh));
  }
  art->result = std::move(result);
  art->seed = config_.seed;
  art->params = set;
  art->digest = geometry::mesh_digest(art->meshes);
  return art;
}

bool Session::reevaluate(const params::ParamSet& set, Events& out) {
  const auto& prog = artifact_->program;
  {
    std::lock_guard lock(mu_);
    ++counters_.evaluations;
  }
  auto outcome = pdl::evaluate(prog, set, registry_, shapes_, config_.seed);
  if (!outcome.ok()) {
    fail(ErrorStage::Runtime, "evaluation failed", outcome.diagnostics, out);
    return false;
  }
  std::shared_ptr<const DesignArtifact> art;
  try {
    art = build_artifact(prog, set, std::move(*outcome.result));
  } catch (const geometry::GeometryError& e) {
    fail(ErrorStage::Runtime, "tessellation failed", {pdl::error(pdl::code::kRuntimeDomain, e.what())}, out);
    return false;
  }
  {
    std::lock_guard lock(mu_);
    artifact_ = art;
  }
  return true;
}

std::vector<SessionEvent> Session::update_parameter(const UpdateRequest& req) {
  if (state_ != SessionState::Live) throw IllegalState(state_, "a parameter update");
  journal_->append(json{{"type", record::kInput}, {"op", "params"}, {"update", to_json(req)}});
  Events out;
  params::ParamSet next = params_;
  try {
    apply_request(req, next);
  } catch (const params::ParamError& e) {
    emit(EventKind::Error,
         json{{"stage", to_string(ErrorStage::Params)}, {"message", e.what()}, {"diagnostics", json::array({diag_for(e)})}},
         out);
    return out;
  }
  auto prev = artifact_;
  if (!reevaluate(next, out)) return out;
  {
    std::lock_guard lock(mu_);
    params_ = std::move(next);
    user_set_.insert(req.update.name);
    proposals_.erase(req.update.name);
  }
  params_changed({req.update.name}, out);
  emit(EventKind::ArtifactUpdated, artifact_summary(artifact_), out);
  return out;
}

std::vector<SessionEvent> Session::confirm(std::string_view name, bool accept) {
  auto it = proposals_.find(std::string(name));
  if (it == proposals_.end()) throw UnknownProposal("no pending proposal for '" + std::string(name) + "'");
  journal_->append(json{{"type", record::kInput}, {"op", "confirm"}, {"name", name}, {"accept", accept}});
  Events out;
  params::ParamSet next = params_;
  auto spec = it->second;
  if (accept) {
    try {
      next.redefine(spec);
      if (spec.default_value) {
        next.apply_update({spec.name, spec.default_value, std::nullopt, params::UpdateSource::Agent}, shapes_);
      }
    } catch (const params::ParamError& e) {
      emit(EventKind::Error,
           json{{"stage", to_string(ErrorStage::Params)}, {"message", e.what()}, {"diagnostics", json::array({diag_for(e)})}},
           out);
      return out;
    }
  }
  bool refresh = accept && state_ == SessionState::Live && next.validate_complete().confirmed();
  if (refresh && !reevaluate(next, out)) return out;
  {
    std::lock_guard lock(mu_);
    proposals_.erase(spec.name);
    if (accept) {
      params_ = std::move(next);
      user_set_.erase(spec.name);
    }
  }
  params_changed(accept ? std::vector<std::string>{spec.name} : std::vector<std::string>{}, out);
  if (refresh) emit(EventKind::ArtifactUpdated, artifact_summary(artifact_), out);
  return out;
}

}  // namespace parlogue::pipeline
