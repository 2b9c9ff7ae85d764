#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace parlogue::pipeline {

inline constexpr int kJournalSchemaVersion = 1;

/// Record types, in the `type` field of every line.
namespace record {
inline constexpr std::string_view kSessionCreated = "session_created";
inline constexpr std::string_view kInput = "input";
inline constexpr std::string_view kAgentCall = "agent_call";
inline constexpr std::string_view kTurn = "turn";
inline constexpr std::string_view kRaResponse = "ra_response";
inline constexpr std::string_view kDesign = "design";
inline constexpr std::string_view kCaOutput = "ca_output";
inline constexpr std::string_view kVerdict = "verdict";
inline constexpr std::string_view kEvent = "event";
}  // namespace record

class JournalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSONL, one compact record per line. With a file, every record is also
/// appended and flushed as it is written.
class Journal {
 public:
  Journal() = default;
  /// Creates parent directories and truncates the file.
  explicit Journal(const std::filesystem::path& file);

  void append(nlohmann::json record);
  std::string text() const;
  std::vector<nlohmann::json> records() const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
  std::optional<std::ofstream> file_;
};

/// Every line must be a JSON object with a string `type` and end with a
/// newline; the first must be session_created with a supported
/// schema_version. Throws JournalError.
std::vector<nlohmann::json> parse_journal(std::string_view text);
std::vector<nlohmann::json> read_journal_file(const std::filesystem::path& path);

}  // namespace parlogue::pipeline
