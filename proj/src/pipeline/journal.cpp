#include "parlogue/pipeline/journal.hpp"

#include <sstream>

namespace parlogue::pipeline {

using nlohmann::json;

Journal::Journal(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  file_.emplace(file, std::ios::binary | std::ios::trunc);
  if (!*file_) throw std::runtime_error("cannot open journal " + file.string());
}

void Journal::append(json record) {
  std::string line = record.dump();
  std::lock_guard lock(mu_);
  if (file_) {
    *file_ << line << '\n';
    file_->flush();
  }
  lines_.push_back(std::move(line));
}

std::string Journal::text() const {
  std::lock_guard lock(mu_);
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

std::vector<json> Journal::records() const {
  std::lock_guard lock(mu_);
  std::vector<json> out;
  out.reserve(lines_.size());
  for (const auto& l : lines_) out.push_back(json::parse(l));
  return out;
}

std::size_t Journal::size() const {
  std::lock_guard lock(mu_);
  return lines_.size();
}

std::vector<json> parse_journal(std::string_view text) {
  std::vector<json> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    ++line_no;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw JournalError("line " + std::to_string(line_no) + " is not terminated");
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      throw JournalError("line " + std::to_string(line_no) + " is not a journal record");
    }
    out.push_back(std::move(j));
  }
  if (out.empty()) throw JournalError("journal is empty");
  const auto& head = out.front();
  if (head["type"] != record::kSessionCreated) throw JournalError("journal does not start with session_created");
  if (!head.contains("schema_version") || !head["schema_version"].is_number_integer()) {
    throw JournalError("journal has no schema_version");
  }
  if (head["schema_version"].get<int>() != kJournalSchemaVersion) {
    throw JournalError("unsupported schema_version " + head["schema_version"].dump());
  }
  return out;
}

std::vector<json> read_journal_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw JournalError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_journal(ss.str());
}

}  // namespace parlogue::pipeline
