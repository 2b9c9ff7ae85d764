#include "parlogue/cli/export.hpp"

#include <stdexcept>

#include "parlogue/pipeline/replay.hpp"

namespace parlogue::cli {

ExportFormat export_format_from_string(std::string_view s) {
  if (s == "json") return ExportFormat::Json;
  if (s == "obj") return ExportFormat::Obj;
  throw std::invalid_argument("unknown export format '" + std::string(s) + "'");
}

ExportResult export_artifact(const std::filesystem::path& input, ExportFormat format,
                             const std::filesystem::path& asset_dir) {
  ExportResult out;
  std::error_code ec;
  auto path = std::filesystem::is_directory(input, ec) ? input / "journal.jsonl" : input;
  if (!std::filesystem::is_regular_file(path, ec)) {
    out.status = ExportStatus::Io;
    out.message = "no journal at " + path.string();
    return out;
  }
  auto r = pipeline::replay_file(path, asset_dir);
  if (r.status == pipeline::ReplayStatus::Corrupt) {
    out.status = ExportStatus::Corrupt;
    out.message = r.message;
    return out;
  }
  if (r.status == pipeline::ReplayStatus::Mismatch) {
    out.status = ExportStatus::Mismatch;
    out.message = r.message;
    return out;
  }
  auto art = r.session->artifact();
  if (!art) {
    out.status = ExportStatus::NoArtifact;
    out.message = "the session never produced an artifact";
    return out;
  }
  out.body = format == ExportFormat::Json ? pipeline::artifact_json(*art).dump() : pipeline::artifact_obj(*art);
  return out;
}

}  // namespace parlogue::cli
