#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "parlogue/compilesvc/protocol.hpp"
#include "parlogue/compilesvc/socket.hpp"

namespace parlogue::compilesvc {

/// Least-recently-used map. Not thread-safe.
template <class V>
class LruCache {
 public:
  explicit LruCache(std::size_t capacity) : capacity_(capacity) {}

  std::optional<V> get(const std::string& key) {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    order_.splice(order_.begin(), order_, it->second);
    return it->second->second;
  }

  void put(const std::string& key, V value) {
    auto it = index_.find(key);
    if (it != index_.end()) {
      it->second->second = std::move(value);
      order_.splice(order_.begin(), order_, it->second);
      return;
    }
    order_.emplace_front(key, std::move(value));
    index_[key] = order_.begin();
    while (order_.size() > capacity_) {
      index_.erase(order_.back().first);
      order_.pop_back();
    }
  }

  std::size_t size() const { return order_.size(); }

 private:
  std::size_t capacity_;
  std::list<std::pair<std::string, V>> order_;
  std::unordered_map<std::string, typename std::list<std::pair<std::string, V>>::iterator> index_;
};

struct WorkerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::size_t cache_capacity = 1024;
  /// Time allowed for a started frame to arrive completely.
  std::chrono::milliseconds frame_timeout{5000};
  /// Time a fetch waits for its sources reply.
  std::chrono::milliseconds fetch_timeout{5000};
};

struct WorkerStats {
  std::uint64_t requests = 0;
  std::uint64_t compiles = 0;  // compile_unit executions
  std::uint64_t cache_hits = 0;
  std::uint64_t fetches = 0;
  std::uint64_t protocol_errors = 0;
};

/// Stateless compile worker. Each connection is served by its own thread,
/// one request at a time; responses carry the request id. The caches only
/// save work: a fresh worker gives the same responses.
class Worker {
 public:
  explicit Worker(WorkerConfig config);
  ~Worker();
  Worker(const Worker&) = delete;
  Worker& operator=(const Worker&) = delete;

  /// Binds and starts accepting. Throws TransportError.
  void start();
  /// Closes the listener and every connection, then joins.
  void stop();
  std::uint16_t port() const { return port_; }
  WorkerStats stats() const;

 private:
  struct Conn;
  void accept_loop();
  void serve(const std::shared_ptr<Conn>& conn);

  WorkerConfig config_;
  Fd listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread acceptor_;

  mutable std::mutex mu_;
  std::vector<std::shared_ptr<Conn>> conns_;
  std::vector<std::thread> threads_;
  WorkerStats stats_;
  LruCache<std::string> sources_;    // registry key -> canonical source
  LruCache<CompileResponse> results_;  // request digest -> response with id 0
};

}  // namespace parlogue::compilesvc
