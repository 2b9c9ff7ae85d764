#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "parlogue/pipeline/session.hpp"

namespace parlogue::pipeline {

enum class ReplayStatus { Match = 0, Mismatch = 2, Corrupt = 3 };

struct ReplayResult {
  ReplayStatus status = ReplayStatus::Match;
  std::string digest;   // final replayed digest, "none" without an artifact
  std::string message;  // what diverged, or why the journal was rejected
  std::shared_ptr<Session> session;  // the replayed session, absent when corrupt

  int exit_code() const { return static_cast<int>(status); }
};

/// Applies one input in its journal form: {"op":"message","text","updates"},
/// {"op":"params","update"} or {"op":"confirm","name","accept"}. Throws what
/// the operation throws, JournalError for an unknown op and
/// nlohmann::json::exception for missing fields.
std::vector<SessionEvent> apply_input(Session& session, const nlohmann::json& input);

/// Re-runs the recorded inputs against a scripted backend built from the
/// journal's agent calls, with an in-process compiler, and compares the
/// state transitions and every artifact digest with the recorded events.
ReplayResult replay_journal(std::string_view text, const std::filesystem::path& asset_dir = default_asset_dir());
ReplayResult replay_file(const std::filesystem::path& path, const std::filesystem::path& asset_dir = default_asset_dir());

}  // namespace parlogue::pipeline
