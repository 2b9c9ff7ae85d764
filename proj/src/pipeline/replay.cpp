#include "parlogue/pipeline/replay.hpp"

#include <fstream>
#include <sstream>

#include "parlogue/pipeline/runner.hpp"

namespace parlogue::pipeline {

using nlohmann::json;
namespace ag = parlogue::agents;

namespace {

struct Recorded {
  std::vector<std::string> states;
  std::vector<std::string> digests;
};

Recorded collect(const std::vector<json>& records) {
  Recorded r;
  for (const auto& rec : records) {
    if (rec.at("type") != record::kEvent) continue;
    auto e = event_from_json(rec.at("event"));
    if (e.kind == EventKind::StateChanged) r.states.push_back(e.data.at("to").get<std::string>());
    if (e.kind == EventKind::ArtifactUpdated) r.digests.push_back(e.data.at("digest").get<std::string>());
  }
  return r;
}

json script_from(const std::vector<json>& records) {
  json entries = json::array();
  for (const auto& rec : records) {
    if (rec.at("type") != record::kAgentCall) continue;
    json e{{"agent", rec.at("agent")}};
    if (rec.contains("error")) {
      e["error"] = rec.at("error");
    } else {
      e["response"] = rec.at("response").get<std::string>();
    }
    entries.push_back(std::move(e));
  }
  return json{{"entries", entries}};
}

std::vector<UpdateRequest> updates_from(const json& arr) {
  std::vector<UpdateRequest> out;
  for (const auto& u : arr) out.push_back(update_request_from_json(u));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

}  // namespace

std::vector<SessionEvent> apply_input(Session& session, const json& input) {
  const auto op = input.at("op").get<std::string>();
  if (op == "message") {
    std::vector<UpdateRequest> updates;
    if (input.contains("updates")) updates = updates_from(input.at("updates"));
    return session.advance(input.at("text").get<std::string>(), updates);
  }
  if (op == "params") return session.update_parameter(update_request_from_json(input.at("update")));
  if (op == "confirm") return session.confirm(input.at("name").get<std::string>(), input.at("accept").get<bool>());
  throw JournalError("unknown input op '" + op + "'");
}

ReplayResult replay_journal(std::string_view text, const std::filesystem::path& asset_dir) {
  ReplayResult out;
  std::vector<json> records;
  Recorded want;
  json script;
  SessionConfig cfg;
  std::string id;
  try {
    records = parse_journal(text);
    want = collect(records);
    script = script_from(records);
    const auto& head = records.front();
    id = head.at("session").get<std::string>();
    SessionConfig base;
    base.asset_dir = asset_dir;
    cfg = session_config_from_json(head.at("config"), base);
  } catch (const std::exception& e) {
    out.status = ReplayStatus::Corrupt;
    out.digest = "none";
    out.message = e.what();
    return out;
  }

  std::shared_ptr<ag::ScriptedBackend> backend;
  try {
    backend = scripted_backend(script);
  } catch (const std::exception& e) {
    out.status = ReplayStatus::Corrupt;
    out.digest = "none";
    out.message = e.what();
    return out;
  }
  auto session = std::make_shared<Session>(id, cfg, backend, std::make_shared<compilesvc::CompileClient>());
  out.session = session;

  try {
    for (const auto& rec : records) {
      if (rec.at("type") == record::kInput) apply_input(*session, rec);
    }
  } catch (const JournalError& e) {
    out.status = ReplayStatus::Corrupt;
    out.message = e.what();
  } catch (const json::exception& e) {
    out.status = ReplayStatus::Corrupt;
    out.message = std::string("malformed input record: ") + e.what();
  } catch (const std::exception& e) {
    out.status = ReplayStatus::Mismatch;
    out.message = std::string("replay diverged: ") + e.what();
  }

  auto art = session->artifact();
  out.digest = art ? art->digest : "none";
  if (out.status != ReplayStatus::Match) return out;

  Recorded got = collect(session->journal().records());
  if (got.states != want.states) {
    out.status = ReplayStatus::Mismatch;
    out.message = "state sequence differs: recorded [" + join(want.states) + "], replayed [" + join(got.states) + "]";
  } else if (got.digests != want.digests) {
    out.status = ReplayStatus::Mismatch;
    out.message = "artifact digests differ: recorded [" + join(want.digests) + "], replayed [" + join(got.digests) + "]";
  } else if (backend->remaining() != 0) {
    out.status = ReplayStatus::Mismatch;
    out.message = std::to_string(backend->remaining()) + " recorded agent calls were not replayed";
  }
  return out;
}

ReplayResult replay_file(const std::filesystem::path& path, const std::filesystem::path& asset_dir) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ReplayResult r;
    r.status = ReplayStatus::Corrupt;
    r.digest = "none";
    r.message = "cannot read " + path.string();
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return replay_journal(ss.str(), asset_dir);
}

}  // namespace parlogue::pipeline
