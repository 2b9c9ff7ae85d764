#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parlogue/params/params.hpp"
#include "parlogue/pdl/diagnostic.hpp"

namespace parlogue::compilesvc {

// Frame: 4-byte big-endian payload length, then a UTF-8 JSON payload.
inline constexpr std::size_t kMaxFrame = 16u << 20;

enum class UnitKind { Method, Logic };

std::string_view to_string(UnitKind k);

/// A method unit holds one method. A logic unit is a program; `params` is
/// the session's parameter set, which the check compares declarations
/// against. `deps` holds registry keys: for a method, the registered
/// methods it may call; for logic, every method it reaches.
struct CompileRequest {
  std::uint64_t id = 0;
  UnitKind kind = UnitKind::Method;
  std::string source;
  std::vector<std::string> deps;
  std::optional<params::ParamSet> params;

  friend bool operator==(const CompileRequest&, const CompileRequest&) = default;
};

enum class CompileStatus { Ok, Fail };

struct CompileResponse {
  std::uint64_t id = 0;
  CompileStatus status = CompileStatus::Fail;
  std::optional<std::string> key;  // Ok method units only
  std::vector<pdl::Diagnostic> diagnostics;

  bool ok() const { return status == CompileStatus::Ok; }
  friend bool operator==(const CompileResponse&, const CompileResponse&) = default;
};

struct MethodSource {
  std::string key;
  std::string source;

  friend bool operator==(const MethodSource&, const MethodSource&) = default;
};

// {"id","kind":"method"|"logic","source","deps"[,"params"]}
nlohmann::json to_json(const CompileRequest& r);
CompileRequest request_from_json(const nlohmann::json& j);  // throws std::invalid_argument
// {"id","status":"ok"|"fail"[,"key"],"diagnostics"}
nlohmann::json to_json(const CompileResponse& r);
CompileResponse response_from_json(const nlohmann::json& j);  // throws std::invalid_argument

// Worker -> client when dependency sources are not cached:
//   {"id","kind":"fetch","keys":[...]}
// Client -> worker:
//   {"id","kind":"sources","sources":[{"key","source"}]}
nlohmann::json fetch_frame(std::uint64_t id, const std::vector<std::string>& keys);
nlohmann::json sources_frame(std::uint64_t id, const std::vector<MethodSource>& sources);

/// The reply to a frame that cannot be read: id 0, status fail, one
/// E_PROTOCOL diagnostic.
CompileResponse protocol_error(std::string message);

/// Header plus compact JSON. Throws std::length_error above kMaxFrame.
std::string encode_frame(const nlohmann::json& payload);
std::uint32_t decode_length(const unsigned char header[4]);

/// The canonical response bytes; both compile modes produce these.
std::string response_bytes(const CompileResponse& r);

}  // namespace parlogue::compilesvc
