#include "parlogue/agents/envelope.hpp"

#include <set>

#include "parlogue/common/text.hpp"

namespace parlogue::agents {

using nlohmann::json;

std::string_view to_string(Speaker s) {
  switch (s) {
    case Speaker::User: return "user";
    case Speaker::Reasoner: return "reasoner";
    case Speaker::System: return "system";
  }
  return "?";
}

Speaker speaker_from_string(std::string_view s) {
  for (auto v : {Speaker::User, Speaker::Reasoner, Speaker::System}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown speaker '" + std::string(s) + "'");
}

json to_json(const ChatTurn& turn) {
  json j{{"seq", turn.seq}, {"speaker", to_string(turn.speaker)}, {"text", turn.text}};
  if (turn.payload) j["payload"] = *turn.payload;
  return j;
}

ChatTurn chat_turn_from_json(const json& j) {
  ChatTurn t;
  t.seq = j.at("seq").get<std::uint64_t>();
  t.speaker = speaker_from_string(j.at("speaker").get<std::string>());
  t.text = j.at("text").get<std::string>();
  if (j.contains("payload")) t.payload = j.at("payload");
  return t;
}

std::string wrap_user_input(std::string_view text, const std::vector<params::ParamUpdate>& updates) {
  std::string out = "<text>" + xml_escape(text) + "</text><updates>";
  if (!updates.empty()) {
    json arr = json::array();
    for (const auto& u : updates) arr.push_back(params::to_json(u));
    out += xml_escape(arr.dump());
  }
  out += "</updates>";
  return out;
}

UserInput unwrap_user_input(std::string_view envelope) {
  constexpr std::string_view open_text = "<text>", mid = "</text><updates>", close = "</updates>";
  if (envelope.substr(0, open_text.size()) != open_text || envelope.size() < open_text.size() + mid.size() + close.size() ||
      envelope.substr(envelope.size() - close.size()) != close) {
    throw std::invalid_argument("not a user input envelope");
  }
  auto m = envelope.find(mid);
  if (m == std::string_view::npos) throw std::invalid_argument("user input envelope has no <updates> element");
  UserInput in;
  in.text = xml_unescape(envelope.substr(open_text.size(), m - open_text.size()));
  auto body_start = m + mid.size();
  auto body = envelope.substr(body_start, envelope.size() - close.size() - body_start);
  if (!body.empty()) {
    json arr = json::parse(xml_unescape(body), nullptr, false);
    if (!arr.is_array()) throw std::invalid_argument("<updates> does not hold a JSON list");
    for (const auto& u : arr) in.updates.push_back(params::update_from_json(u));
  }
  return in;
}

std::string_view to_string(ProtocolReason r) {
  switch (r) {
    case ProtocolReason::NoJson: return "NoJson";
    case ProtocolReason::InvalidJson: return "InvalidJson";
    case ProtocolReason::NotObject: return "NotObject";
    case ProtocolReason::MissingField: return "MissingField";
    case ProtocolReason::UnknownField: return "UnknownField";
    case ProtocolReason::BadType: return "BadType";
    case ProtocolReason::WrongFieldType: return "WrongFieldType";
    case ProtocolReason::InvalidParameter: return "InvalidParameter";
  }
  return "?";
}

std::string_view to_string(RaType t) {
  switch (t) {
    case RaType::Question: return "question";
    case RaType::Update: return "update";
    case RaType::Final: return "final";
  }
  return "?";
}

std::string_view extract_json(std::string_view raw) {
  auto text = trim(raw);
  auto fence = text.find("```");
  if (fence != std::string_view::npos) {
    auto line_end = text.find('\n', fence);
    if (line_end == std::string_view::npos) throw ProtocolError(ProtocolReason::NoJson, "unterminated code fence");
    auto close = text.find("```", line_end);
    if (close == std::string_view::npos) throw ProtocolError(ProtocolReason::NoJson, "unterminated code fence");
    text = trim(text.substr(line_end + 1, close - line_end - 1));
  }
  if (text.empty() || (text.front() != '{' && text.front() != '[')) {
    throw ProtocolError(ProtocolReason::NoJson, "response does not contain a JSON object");
  }
  return text;
}

namespace {

json parse_object(std::string_view raw, std::initializer_list<std::string_view> fields) {
  auto text = extract_json(raw);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ProtocolError(ProtocolReason::InvalidJson, "response JSON does not parse");
  if (!j.is_object()) throw ProtocolError(ProtocolReason::NotObject, "response JSON is not an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto f : fields) known = known || it.key() == f;
    if (!known) throw ProtocolError(ProtocolReason::UnknownField, "unexpected field '" + it.key() + "'");
  }
  for (auto f : fields) {
    if (!j.contains(f)) throw ProtocolError(ProtocolReason::MissingField, "missing field '" + std::string(f) + "'");
  }
  return j;
}

std::string string_field(const json& j, const char* field) {
  const auto& v = j.at(field);
  if (!v.is_string()) throw ProtocolError(ProtocolReason::WrongFieldType, std::string("'") + field + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list_field(const json& j, const char* field) {
  const auto& v = j.at(field);
  std::vector<std::string> out;
  bool ok = v.is_array();
  if (ok) {
    for (const auto& e : v) {
      if (!e.is_string()) {
        ok = false;
        break;
      }
      out.push_back(e.get<std::string>());
    }
  }
  if (!ok) throw ProtocolError(ProtocolReason::WrongFieldType, std::string("'") + field + "' must be a list of strings");
  return out;
}

}  // namespace

RaResponse parse_ra_response(std::string_view raw) {
  json j = parse_object(raw, {"type", "text", "parameters"});
  RaResponse r;
  const auto& type = j.at("type");
  if (!type.is_string()) throw ProtocolError(ProtocolReason::WrongFieldType, "'type' must be a string");
  auto t = type.get<std::string>();
  if (t == "question") {
    r.type = RaType::Question;
  } else if (t == "update") {
    r.type = RaType::Update;
  } else if (t == "final") {
    r.type = RaType::Final;
  } else {
    throw ProtocolError(ProtocolReason::BadType, "unknown response type '" + t + "'");
  }
  r.text = string_field(j, "text");
  const auto& ps = j.at("parameters");
  if (!ps.is_array()) throw ProtocolError(ProtocolReason::WrongFieldType, "'parameters' must be a list");
  std::set<std::string> seen;
  for (const auto& p : ps) {
    try {
      auto spec = params::spec_from_json(p);
      params::validate_spec(spec);
      if (!seen.insert(spec.name).second) {
        throw ProtocolError(ProtocolReason::InvalidParameter, "parameter '" + spec.name + "' listed twice");
      }
      r.parameters.push_back(std::move(spec));
    } catch (const params::ParamError& e) {
      throw ProtocolError(ProtocolReason::InvalidParameter, e.what());
    } catch (const json::exception& e) {
      throw ProtocolError(ProtocolReason::InvalidParameter, e.what());
    }
  }
  return r;
}

json to_json(const RaResponse& r) {
  json ps = json::array();
  for (const auto& p : r.parameters) ps.push_back(params::to_json(p));
  return json{{"type", to_string(r.type)}, {"text", r.text}, {"parameters", ps}};
}

CaOutput parse_ca_output(std::string_view raw) {
  json j = parse_object(raw, {"Name", "Description", "Dependency", "Method_New", "Logic"});
  CaOutput c;
  c.name = string_field(j, "Name");
  c.description = string_field(j, "Description");
  c.dependency = string_list_field(j, "Dependency");
  c.method_new = string_list_field(j, "Method_New");
  c.logic = string_field(j, "Logic");
  return c;
}

json to_json(const CaOutput& c) {
  return json{{"Name", c.name},
              {"Description", c.description},
              {"Dependency", c.dependency},
              {"Method_New", c.method_new},
              {"Logic", c.logic}};
}

}  // namespace parlogue::agents
