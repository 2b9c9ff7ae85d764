#include "parlogue/compilesvc/protocol.hpp"

#include <stdexcept>

namespace parlogue::compilesvc {

using nlohmann::json;

std::string_view to_string(UnitKind k) { return k == UnitKind::Method ? "method" : "logic"; }

json to_json(const CompileRequest& r) {
  json j{{"id", r.id}, {"kind", to_string(r.kind)}, {"source", r.source}, {"deps", r.deps}};
  if (r.params) j["params"] = params::to_json(*r.params);
  return j;
}

CompileRequest request_from_json(const json& j) {
  try {
    CompileRequest r;
    r.id = j.at("id").get<std::uint64_t>();
    auto kind = j.at("kind").get<std::string>();
    if (kind == "method") {
      r.kind = UnitKind::Method;
    } else if (kind == "logic") {
      r.kind = UnitKind::Logic;
    } else {
      throw std::invalid_argument("unknown unit kind '" + kind + "'");
    }
    r.source = j.at("source").get<std::string>();
    r.deps = j.at("deps").get<std::vector<std::string>>();
    if (j.contains("params") && !j.at("params").is_null()) r.params = params::set_from_json(j.at("params"));
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed compile request: ") + e.what());
  } catch (const params::ParamError& e) {
    throw std::invalid_argument(std::string("malformed compile request params: ") + e.what());
  }
}

json to_json(const CompileResponse& r) {
  json j{{"id", r.id}, {"status", r.ok() ? "ok" : "fail"}, {"diagnostics", pdl::to_json(r.diagnostics)}};
  if (r.key) j["key"] = *r.key;
  return j;
}

CompileResponse response_from_json(const json& j) {
  try {
    CompileResponse r;
    r.id = j.at("id").get<std::uint64_t>();
    auto status = j.at("status").get<std::string>();
    if (status != "ok" && status != "fail") throw std::invalid_argument("unknown status '" + status + "'");
    r.status = status == "ok" ? CompileStatus::Ok : CompileStatus::Fail;
    if (j.contains("key")) r.key = j.at("key").get<std::string>();
    r.diagnostics = pdl::diagnostics_from_json(j.at("diagnostics"));
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed compile response: ") + e.what());
  }
}

json fetch_frame(std::uint64_t id, const std::vector<std::string>& keys) {
  return json{{"id", id}, {"kind", "fetch"}, {"keys", keys}};
}

json sources_frame(std::uint64_t id, const std::vector<MethodSource>& sources) {
  json arr = json::array();
  for (const auto& s : sources) arr.push_back({{"key", s.key}, {"source", s.source}});
  return json{{"id", id}, {"kind", "sources"}, {"sources", arr}};
}

CompileResponse protocol_error(std::string message) {
  return CompileResponse{0, CompileStatus::Fail, std::nullopt, {pdl::error(pdl::code::kProtocol, std::move(message))}};
}

std::string encode_frame(const json& payload) {
  std::string body = payload.dump();
  if (body.size() > kMaxFrame) throw std::length_error("frame payload exceeds the size limit");
  auto n = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(4 + body.size());
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out += body;
  return out;
}

std::uint32_t decode_length(const unsigned char header[4]) {
  return (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) | (std::uint32_t{header[2]} << 8) |
         std::uint32_t{header[3]};
}

std::string response_bytes(const CompileResponse& r) { return encode_frame(to_json(r)); }

}  // namespace parlogue::compilesvc
