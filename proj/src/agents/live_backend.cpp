#include <cstdlib>

#include <httplib.h>

#include "parlogue/agents/backend.hpp"

namespace parlogue::agents {

using nlohmann::json;

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

// "scheme://host[:port]" and the path prefix of a base url.
std::pair<std::string, std::string> split_url(const std::string& url) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("LLM url needs a scheme: " + url);
  auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

}  // namespace

LiveConfig LiveConfig::from_env() {
  LiveConfig c{env_or_empty("PARLOGUE_LLM_URL"), env_or_empty("PARLOGUE_LLM_MODEL"), env_or_empty("PARLOGUE_LLM_KEY")};
  if (c.url.empty()) throw std::runtime_error("PARLOGUE_LLM_URL is not set");
  if (c.model.empty()) throw std::runtime_error("PARLOGUE_LLM_MODEL is not set");
  return c;
}

LiveBackend::LiveBackend(LiveConfig config) : config_(std::move(config)) { split_url(config_.url); }

std::string LiveBackend::send(const AgentRequest& request, std::chrono::milliseconds timeout, std::stop_token stop) {
  if (stop.stop_requested()) throw BackendError(BackendErrc::Cancelled, "request cancelled");
  auto [origin, prefix] = split_url(config_.url);

  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
  for (const auto& m : request.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  json body{{"model", config_.model}, {"messages", messages}, {"temperature", 0}};

  httplib::Client cli(origin);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config_.key.empty()) headers.emplace("Authorization", "Bearer " + config_.key);

  std::stop_callback on_stop(stop, [&cli] { cli.stop(); });
  auto started = std::chrono::steady_clock::now();
  auto res = cli.Post(prefix + "/chat/completions", headers, body.dump(), "application/json");
  if (stop.stop_requested()) throw BackendError(BackendErrc::Cancelled, "request cancelled");
  if (!res) {
    auto err = res.error();
    bool timed_out = err == httplib::Error::ConnectionTimeout ||
                     (err == httplib::Error::Read && std::chrono::steady_clock::now() - started >= timeout);
    if (timed_out) throw BackendError(BackendErrc::Timeout, "LLM request timed out");
    throw BackendError(BackendErrc::Transport, "LLM request failed: " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw BackendError(BackendErrc::Transport, "LLM endpoint answered HTTP " + std::to_string(res->status));
  }
  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded()) throw BackendError(BackendErrc::BadResponse, "LLM reply is not JSON");
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw BackendError(BackendErrc::BadResponse, "LLM reply has no choices[0].message.content");
  }
}

}  // namespace parlogue::agents
