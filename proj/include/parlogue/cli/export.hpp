#pragma once

#include <filesystem>
#include <string>

namespace parlogue::cli {

enum class ExportFormat { Json, Obj };

ExportFormat export_format_from_string(std::string_view s);  // "json" | "obj"

/// Exit codes of `parlogue export`.
enum class ExportStatus { Ok = 0, Io = 1, Mismatch = 2, Corrupt = 3, NoArtifact = 4 };

struct ExportResult {
  ExportStatus status = ExportStatus::Ok;
  std::string body;     // the artifact when status is Ok
  std::string message;  // otherwise
};

/// Replays the journal (a file, or a session directory holding
/// journal.jsonl) and renders its final artifact, byte for byte what the
/// service's artifact route returns.
ExportResult export_artifact(const std::filesystem::path& input, ExportFormat format,
                             const std::filesystem::path& asset_dir);

}  // namespace parlogue::cli
