#include <algorithm>

#include "parlogue/params/params.hpp"

namespace parlogue::params {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ParamError(ParamErrc::InvalidSpec, what); }

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) bad("expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) bad("unknown key '" + key + "'");
  }
}

const json* field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string require_string(const json& j, const char* key) {
  const json* f = field(j, key);
  if (f == nullptr || !f->is_string()) bad(std::string("'") + key + "' must be a string");
  return f->get<std::string>();
}

std::optional<ShapeId> ref_from_json(const json* f) {
  if (f == nullptr) return std::nullopt;
  if (!f->is_number_unsigned() && !(f->is_number_integer() && f->get<std::int64_t>() >= 0)) {
    bad("'ref' must be a non-negative integer");
  }
  return ShapeId(f->get<std::uint64_t>());
}

}  // namespace

json value_to_json(const ParamValue& value) {
  return std::visit([](const auto& v) { return json(v); }, value);
}

ParamValue value_from_json(const json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ParamError(ParamErrc::KindMismatch, "unsupported value " + j.dump());
}

json to_json(const ParamSpec& spec) {
  json j = json::object();
  j["name"] = spec.name;
  j["kind"] = std::string(to_string(spec.kind.tag));
  if (spec.kind.tag == KindTag::Choice) j["options"] = spec.kind.options;
  j["range"] = spec.range ? json::array({spec.range->min, spec.range->max}) : json(nullptr);
  j["default"] = spec.default_value ? value_to_json(*spec.default_value) : json(nullptr);
  j["status"] = spec.status == ParamStatus::Confirmed ? "confirmed" : "pending";
  j["value"] = spec.value ? value_to_json(*spec.value) : json(nullptr);
  j["ref"] = spec.ref ? json(spec.ref->value()) : json(nullptr);
  return j;
}

ParamSpec spec_from_json(const json& j) {
  reject_unknown_keys(j, {"name", "kind", "options", "range", "default", "status", "value", "ref"});
  ParamSpec spec;
  spec.name = require_string(j, "name");
  const auto tag = kind_tag_from_string(require_string(j, "kind"));
  if (!tag) bad("unknown kind '" + j.at("kind").get<std::string>() + "'");
  spec.kind.tag = *tag;
  if (const json* opts = field(j, "options")) {
    if (!opts->is_array()) bad("'options' must be an array of strings");
    for (const auto& o : *opts) {
      if (!o.is_string()) bad("'options' must be an array of strings");
      spec.kind.options.push_back(o.get<std::string>());
    }
  }
  if (const json* r = field(j, "range")) {
    if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number() || !(*r)[1].is_number()) {
      bad("'range' must be [min, max]");
    }
    spec.range = Range{(*r)[0].get<double>(), (*r)[1].get<double>()};
  }
  if (const json* d = field(j, "default")) spec.default_value = coerce_value(spec.kind, spec.range, value_from_json(*d));
  if (const json* s = field(j, "status")) {
    if (*s == "confirmed") {
      spec.status = ParamStatus::Confirmed;
    } else if (*s == "pending") {
      spec.status = ParamStatus::Pending;
    } else {
      bad("'status' must be \"pending\" or \"confirmed\"");
    }
  }
  if (const json* v = field(j, "value")) spec.value = coerce_value(spec.kind, spec.range, value_from_json(*v));
  spec.ref = ref_from_json(field(j, "ref"));
  validate_spec(spec);
  return spec;
}

json to_json(const ParamSet& set) {
  json arr = json::array();
  for (const auto& s : set.specs()) arr.push_back(to_json(s));
  return arr;
}

ParamSet set_from_json(const json& j) {
  if (!j.is_array()) bad("a parameter set is a JSON array");
  ParamSet set;
  for (const auto& item : j) set.restore(spec_from_json(item));
  return set;
}

json to_json(const ParamUpdate& update) {
  json j = json::object();
  j["name"] = update.name;
  if (update.value) j["value"] = value_to_json(*update.value);
  if (update.ref) j["ref"] = update.ref->value();
  j["source"] = update.source == UpdateSource::Agent ? "agent" : "user";
  return j;
}

ParamUpdate update_from_json(const json& j) {
  reject_unknown_keys(j, {"name", "value", "ref", "source"});
  ParamUpdate u;
  u.name = require_string(j, "name");
  if (const json* v = field(j, "value")) u.value = value_from_json(*v);
  u.ref = ref_from_json(field(j, "ref"));
  if (const json* s = field(j, "source")) {
    if (*s == "agent") {
      u.source = UpdateSource::Agent;
    } else if (*s == "user") {
      u.source = UpdateSource::User;
    } else {
      bad("'source' must be \"user\" or \"agent\"");
    }
  }
  if (u.value.has_value() == u.ref.has_value()) bad("an update carries exactly one of 'value' or 'ref'");
  return u;
}

}  // namespace parlogue::params
