#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "parlogue/pdl/diagnostic.hpp"
#include "parlogue/pipeline/runner.hpp"

namespace httplib {
class Server;
}

namespace parlogue::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path ui_dir;  // static files served at /, if set
  std::chrono::milliseconds keepalive{15'000};  // comment line on an idle event stream
  int threads = 32;
};

/// {"code","message","diagnostics"}
nlohmann::json error_body(std::string_view code, std::string_view message,
                          const std::vector<pdl::Diagnostic>& diagnostics = {});

/// One server-sent event: id, event name and the SessionEvent as data.
std::string sse_frame(const pipeline::SessionEvent& e);

/// HTTP front end over an Engine.
///
///   POST /sessions                    {backend, fixture?, final_prompt_variant?, ...}
///   GET  /sessions
///   GET  /sessions/{id}
///   POST /sessions/{id}/message       {text, updates[]}
///   POST /sessions/{id}/params        ParamUpdate
///   POST /sessions/{id}/confirm       {name, accept}
///   GET  /sessions/{id}/artifact      ?format=json|obj
///   GET  /sessions/{id}/journal
///   GET  /sessions/{id}/events        ?from=seq&follow=0|1, text/event-stream
class HttpApi {
 public:
  HttpApi(pipeline::Engine& engine, ServiceConfig config);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  /// Binds the socket and returns the port. Throws std::runtime_error.
  int bind();
  /// Serves until stop(). Binds first when needed.
  void listen();
  /// listen() on a background thread; returns once the server accepts.
  void start();
  void stop();
  int port() const { return port_; }

 private:
  void routes();

  pipeline::Engine& engine_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
  int port_ = -1;
  std::thread thread_;
};

}  // namespace parlogue::service
