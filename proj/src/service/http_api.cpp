#include "parlogue/service/http_api.hpp"

#include <httplib.h>

#include <algorithm>

namespace parlogue::service {

using nlohmann::json;
namespace pl = parlogue::pipeline;

json error_body(std::string_view code, std::string_view message, const std::vector<pdl::Diagnostic>& diagnostics) {
  return json{{"code", code}, {"message", message}, {"diagnostics", pdl::to_json(diagnostics)}};
}

std::string sse_frame(const pl::SessionEvent& e) {
  return "id: " + std::to_string(e.seq) + "\nevent: " + std::string(pl::to_string(e.kind)) +
         "\ndata: " + pl::to_json(e).dump() + "\n\n";
}

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message,
                const std::vector<pdl::Diagnostic>& diags = {}) {
  send_json(res, status, error_body(code, message, diags));
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  return json::parse(req.body);
}

json events_json(const std::vector<pl::SessionEvent>& events) {
  json arr = json::array();
  for (const auto& e : events) arr.push_back(pl::to_json(e));
  return arr;
}

// The first Error event meaning the request itself was rejected. A runtime
// error counts only for parameter updates; after a message it is a failed
// generation.
const pl::SessionEvent* rejection(const std::vector<pl::SessionEvent>& events, bool runtime) {
  for (const auto& e : events) {
    if (e.kind != pl::EventKind::Error) continue;
    auto stage = e.data.value("stage", "");
    if (stage == pl::to_string(pl::ErrorStage::Params)) return &e;
    if (runtime && stage == pl::to_string(pl::ErrorStage::Runtime)) return &e;
  }
  return nullptr;
}

std::vector<pdl::Diagnostic> diagnostics_of(const pl::SessionEvent& e) {
  std::vector<pdl::Diagnostic> out;
  for (const auto& d : e.data.at("diagnostics")) out.push_back(pdl::diagnostic_from_json(d));
  return out;
}

// Runs an operation against the session named in the path and maps the
// engine's exceptions onto status codes.
template <class F>
void with_session(pl::Engine& engine, const httplib::Request& req, httplib::Response& res, F fn) {
  auto handle = engine.find(req.matches[1]);
  if (!handle) {
    send_error(res, 404, "not_found", "no session '" + std::string(req.matches[1]) + "'");
    return;
  }
  try {
    fn(*handle);
  } catch (const pl::IllegalState& e) {
    send_error(res, 409, "illegal_state", e.what());
  } catch (const pl::UnknownProposal& e) {
    send_error(res, 409, "no_proposal", e.what());
  } catch (const params::ParamError& e) {
    send_error(res, 422, "validation_failed", e.what(),
               {pdl::Diagnostic{pdl::Severity::Error, std::string(params::to_string(e.code())), e.what(), {}}});
  } catch (const json::parse_error& e) {
    send_error(res, 400, "bad_request", std::string("body is not JSON: ") + e.what());
  } catch (const json::exception& e) {
    send_error(res, 422, "validation_failed", e.what());
  } catch (const std::invalid_argument& e) {
    send_error(res, 422, "validation_failed", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

// Answers an operation: 422 when the engine rejected the update, else the
// events it produced.
void send_outcome(httplib::Response& res, pl::SessionHandle& h, const std::vector<pl::SessionEvent>& events,
                  bool runtime = true) {
  if (const auto* e = rejection(events, runtime)) {
    auto stage = e->data.at("stage").get<std::string>();
    send_error(res, 422, stage == "params" ? "validation_failed" : "evaluation_failed",
               e->data.at("message").get<std::string>(), diagnostics_of(*e));
    return;
  }
  send_json(res, 200, json{{"state", pl::to_string(h.session().state())}, {"events", events_json(events)}});
}

std::uint64_t start_seq(const httplib::Request& req) {
  std::uint64_t from = 1;
  if (req.has_header("Last-Event-ID")) from = std::stoull(req.get_header_value("Last-Event-ID")) + 1;
  if (req.has_param("from")) from = std::stoull(req.get_param_value("from"));
  return std::max<std::uint64_t>(from, 1);
}

}  // namespace

HttpApi::HttpApi(pl::Engine& engine, ServiceConfig config)
    : engine_(engine), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
  int threads = config_.threads;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<std::size_t>(threads)); };
  if (!config_.ui_dir.empty() && !server_->set_mount_point("/", config_.ui_dir.string())) {
    throw std::runtime_error("cannot serve UI directory " + config_.ui_dir.string());
  }
  routes();
}

HttpApi::~HttpApi() { stop(); }

void HttpApi::routes() {
  auto& s = *server_;

  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      auto opts = pl::create_options_from_json(parse_body(req));
      auto h = engine_.create(opts);
      send_json(res, 201, h->describe());
    } catch (const json::parse_error& e) {
      send_error(res, 400, "bad_request", std::string("body is not JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
      send_error(res, 422, "validation_failed", e.what());
    } catch (const std::exception& e) {
      send_error(res, 503, "backend_unavailable", e.what());
    }
  });

  s.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json{{"sessions", engine_.ids()}});
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+))", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) { send_json(res, 200, h.describe()); });
  });

  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/message)", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) {
      auto body = parse_body(req);
      if (!body.is_object()) throw std::invalid_argument("body must be an object");
      for (auto it = body.begin(); it != body.end(); ++it) {
        if (it.key() != "text" && it.key() != "updates") throw std::invalid_argument("unknown field '" + it.key() + "'");
      }
      auto text = body.at("text").get<std::string>();
      std::vector<pl::UpdateRequest> updates;
      if (body.contains("updates")) {
        for (const auto& u : body.at("updates")) updates.push_back(pl::update_request_from_json(u));
      }
      auto events = h.run([&](pl::Session& s) { return s.advance(text, updates); });
      send_outcome(res, h, events, false);
    });
  });

  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/params)", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) {
      auto update = pl::update_request_from_json(parse_body(req));
      auto events = h.run([&](pl::Session& s) { return s.update_parameter(update); });
      send_outcome(res, h, events);
    });
  });

  s.Post(R"(/sessions/([A-Za-z0-9_-]+)/confirm)", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) {
      auto body = parse_body(req);
      auto name = body.at("name").get<std::string>();
      auto accept = body.at("accept").get<bool>();
      auto events = h.run([&](pl::Session& s) { return s.confirm(name, accept); });
      send_outcome(res, h, events);
    });
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+)/artifact)", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) {
      auto format = req.has_param("format") ? req.get_param_value("format") : "json";
      if (format != "json" && format != "obj") {
        send_error(res, 422, "validation_failed", "format must be json or obj");
        return;
      }
      auto art = h.session().artifact();
      if (!art) {
        send_error(res, 409, "no_artifact", "the session has no artifact yet");
        return;
      }
      if (format == "obj") {
        res.set_content(pl::artifact_obj(*art), "text/plain");
      } else {
        res.set_content(pl::artifact_json(*art).dump(), kJson);
      }
    });
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+)/journal)", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) {
      res.set_content(h.session().journal().text(), "application/x-ndjson");
    });
  });

  s.Get(R"(/sessions/([A-Za-z0-9_-]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    with_session(engine_, req, res, [&](pl::SessionHandle& h) {
      std::uint64_t from = start_seq(req);
      bool follow = !req.has_param("follow") || req.get_param_value("follow") != "0";
      res.set_header("Cache-Control", "no-cache");
      if (!follow) {
        std::string body;
        for (const auto& e : h.session().events().since(from)) body += sse_frame(e);
        res.set_content(body, "text/event-stream");
        return;
      }
      auto handle = engine_.find(req.matches[1]);
      auto next = std::make_shared<std::uint64_t>(from);
      auto idle = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());
      res.set_chunked_content_provider(
          "text/event-stream", [this, handle, next, idle](std::size_t, httplib::DataSink& sink) {
            const auto& log = handle->session().events();
            for (;;) {
              if (stopping_) {
                sink.done();
                return true;
              }
              auto events = log.wait_since(*next, std::chrono::milliseconds(200));
              if (!events.empty()) {
                std::string chunk;
                for (const auto& e : events) chunk += sse_frame(e);
                *next = events.back().seq + 1;
                *idle = std::chrono::steady_clock::now();
                return sink.write(chunk.data(), chunk.size());
              }
              if (log.closed()) {
                sink.done();
                return true;
              }
              if (!sink.is_writable()) return false;
              if (std::chrono::steady_clock::now() - *idle >= config_.keepalive) {
                *idle = std::chrono::steady_clock::now();
                static const std::string ping = ": keepalive\n\n";
                return sink.write(ping.data(), ping.size());
              }
            }
          });
    });
  });

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    } catch (...) {
      send_error(res, 500, "internal", "unknown error");
    }
  });
}

int HttpApi::bind() {
  if (port_ >= 0) return port_;
  if (config_.port == 0) {
    port_ = server_->bind_to_any_port(config_.host);
  } else {
    port_ = server_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ < 0) throw std::runtime_error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  return port_;
}

void HttpApi::listen() {
  bind();
  server_->listen_after_bind();
}

void HttpApi::start() {
  bind();
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpApi::stop() {
  stopping_ = true;
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace parlogue::service
