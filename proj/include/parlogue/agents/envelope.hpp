#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parlogue/params/params.hpp"

namespace parlogue::agents {

enum class Speaker { User, Reasoner, System };

std::string_view to_string(Speaker s);
Speaker speaker_from_string(std::string_view s);

/// `seq` is the turn's position in the transcript. Wall-clock time is kept
/// out so transcripts stay byte-identical across runs.
struct ChatTurn {
  Speaker speaker = Speaker::User;
  std::string text;
  std::optional<nlohmann::json> payload;
  std::uint64_t seq = 0;

  friend bool operator==(const ChatTurn&, const ChatTurn&) = default;
};

nlohmann::json to_json(const ChatTurn& turn);
ChatTurn chat_turn_from_json(const nlohmann::json& j);

/// `<text>...</text><updates>[...]</updates>`; no updates gives an empty
/// `<updates>` element.
std::string wrap_user_input(std::string_view text, const std::vector<params::ParamUpdate>& updates);

struct UserInput {
  std::string text;
  std::vector<params::ParamUpdate> updates;
};

/// Inverse of wrap_user_input. Throws std::invalid_argument.
UserInput unwrap_user_input(std::string_view envelope);

enum class ProtocolReason { NoJson, InvalidJson, NotObject, MissingField, UnknownField, BadType, WrongFieldType,
                            InvalidParameter };

std::string_view to_string(ProtocolReason r);

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ProtocolReason reason, const std::string& detail)
      : std::runtime_error(std::string(to_string(reason)) + ": " + detail), reason_(reason) {}
  ProtocolReason reason() const { return reason_; }

 private:
  ProtocolReason reason_;
};

enum class RaType { Question, Update, Final };

std::string_view to_string(RaType t);

struct RaResponse {
  RaType type = RaType::Question;
  std::string text;
  std::vector<params::ParamSpec> parameters;

  friend bool operator==(const RaResponse&, const RaResponse&) = default;
};

/// One JSON object, bare or in a ``` fence, with exactly type, text and
/// parameters.
RaResponse parse_ra_response(std::string_view raw);
nlohmann::json to_json(const RaResponse& r);

struct CaOutput {
  std::string name;
  std::string description;
  std::vector<std::string> dependency;
  std::vector<std::string> method_new;
  std::string logic;  // parameter declarations and the logic block

  friend bool operator==(const CaOutput&, const CaOutput&) = default;
};

/// Envelope only: keys Name, Description, Dependency, Method_New, Logic.
/// PDL payloads are not parsed here.
CaOutput parse_ca_output(std::string_view raw);
nlohmann::json to_json(const CaOutput& c);

/// The object text inside `raw`: a fenced block if there is one, otherwise
/// the trimmed text. Throws ProtocolError(NoJson).
std::string_view extract_json(std::string_view raw);

}  // namespace parlogue::agents
