#include "parlogue/compilesvc/worker.hpp"

#include <sys/socket.h>

#include <deque>
#include <map>
#include <algorithm>

#include "parlogue/common/hash.hpp"
#include "parlogue/compilesvc/compiler.hpp"

namespace parlogue::compilesvc {

using nlohmann::json;

struct Worker::Conn {
  Fd fd;
  std::atomic<bool> done{false};
};

Worker::Worker(WorkerConfig config)
    : config_(std::move(config)), sources_(config_.cache_capacity), results_(config_.cache_capacity) {}

Worker::~Worker() { stop(); }

void Worker::start() {
  auto [fd, port] = listen_tcp(config_.host, config_.port);
  listener_ = std::move(fd);
  port_ = port;
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void Worker::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listener_.get(), SHUT_RDWR);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(mu_);
    for (auto& c : conns_) ::shutdown(c->fd.get(), SHUT_RDWR);
    threads.swap(threads_);
  }
  for (auto& t : threads) t.join();
  std::lock_guard lock(mu_);
  conns_.clear();
  listener_.reset();
}

WorkerStats Worker::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

void Worker::accept_loop() {
  while (running_) {
    int fd = ::accept4(listener_.get(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (!running_) break;
      if (errno == EINTR || errno == ECONNABORTED) continue;
      break;
    }
    auto conn = std::make_shared<Conn>();
    conn->fd = Fd(fd);
    std::lock_guard lock(mu_);
    if (!running_) break;
    for (std::size_t i = 0; i < conns_.size();) {
      if (conns_[i]->done) {
        threads_[i].join();
        conns_.erase(conns_.begin() + static_cast<std::ptrdiff_t>(i));
        threads_.erase(threads_.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
    conns_.push_back(conn);
    threads_.emplace_back([this, conn] {
      serve(conn);
      conn->done = true;
    });
  }
}

namespace {

std::string request_digest(const CompileRequest& req) {
  auto j = to_json(req);
  j["id"] = 0;
  return sha256_hex(j.dump());
}

}  // namespace

void Worker::serve(const std::shared_ptr<Conn>& conn) {
  const int fd = conn->fd.get();
  const auto io_timeout = config_.frame_timeout;
  std::deque<std::string> pending;

  auto send = [&](const json& j) { return write_all(fd, encode_frame(j), io_timeout); };
  auto protocol_failure = [&](const std::string& msg) {
    {
      std::lock_guard lock(mu_);
      ++stats_.protocol_errors;
    }
    return send(to_json(protocol_error(msg)));
  };

  for (;;) {
    std::string payload;
    if (!pending.empty()) {
      payload = std::move(pending.front());
      pending.pop_front();
    } else {
      auto st = read_frame(fd, payload, std::chrono::milliseconds(-1), io_timeout);
      if (st == ReadStatus::Closed || st == ReadStatus::Error) break;
      if (st == ReadStatus::Truncated) {
        protocol_failure("truncated frame");
        break;
      }
      if (st == ReadStatus::Oversize) {
        protocol_failure("frame exceeds the size limit");
        break;
      }
    }

    json j = json::parse(payload, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      if (!protocol_failure("frame payload is not a JSON object")) break;
      continue;
    }
    CompileRequest req;
    try {
      req = request_from_json(j);
    } catch (const std::invalid_argument& e) {
      if (!protocol_failure(e.what())) break;
      continue;
    }

    const auto digest = request_digest(req);
    std::optional<CompileResponse> cached;
    std::vector<std::string> missing;
    std::map<std::string, std::string, std::less<>> deps;
    {
      std::lock_guard lock(mu_);
      ++stats_.requests;
      cached = results_.get(digest);
      if (cached) {
        ++stats_.cache_hits;
      } else {
        for (const auto& k : req.deps) {
          if (auto s = sources_.get(k)) {
            deps[k] = *s;
          } else {
            missing.push_back(k);
          }
        }
      }
    }
    if (cached) {
      cached->id = req.id;
      if (!send(to_json(*cached))) break;
      continue;
    }

    if (!missing.empty()) {
      {
        std::lock_guard lock(mu_);
        ++stats_.fetches;
      }
      if (!send(fetch_frame(req.id, missing))) break;
      bool answered = false;
      while (!answered) {
        std::string reply;
        auto st = read_frame(fd, reply, config_.fetch_timeout, io_timeout);
        if (st != ReadStatus::Ok) break;
        json r = json::parse(reply, nullptr, false);
        if (r.is_object() && r.value("kind", "") == "sources" && r.value("id", std::uint64_t{0}) == req.id) {
          try {
            for (const auto& s : r.at("sources")) deps[s.at("key").get<std::string>()] = s.at("source").get<std::string>();
            answered = true;
          } catch (const json::exception&) {
            break;
          }
        } else {
          pending.push_back(std::move(reply));
        }
      }
      if (!answered) {
        protocol_failure("no sources reply for request " + std::to_string(req.id));
        break;
      }
    }

    auto lookup = [&deps](std::string_view key) -> std::optional<std::string> {
      auto it = deps.find(key);
      if (it == deps.end()) return std::nullopt;
      return it->second;
    };
    auto resp = compile_unit(req, lookup);
    {
      std::lock_guard lock(mu_);
      ++stats_.compiles;
      // Only sources that reproduced their key are worth keeping.
      if (resp.ok()) {
        for (const auto& [k, s] : deps) sources_.put(k, s);
        if (resp.key) sources_.put(*resp.key, req.source);
      }
      // A reply shaped by a missing source could change once it is known.
      bool complete = std::all_of(req.deps.begin(), req.deps.end(), [&](const std::string& k) { return deps.count(k) > 0; });
      if (complete) {
        auto stored = resp;
        stored.id = 0;
        results_.put(digest, std::move(stored));
      }
    }
    if (!send(to_json(resp))) break;
  }
  ::shutdown(fd, SHUT_RDWR);
}

}  // namespace parlogue::compilesvc
