#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace parlogue::compilesvc {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owning file descriptor.
class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void reset();

 private:
  int fd_ = -1;
};

/// "host:port". Throws std::invalid_argument.
std::pair<std::string, std::uint16_t> parse_host_port(std::string_view addr);

/// Throws TransportError.
Fd connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout);

/// Port 0 picks a free port; the bound port is returned.
std::pair<Fd, std::uint16_t> listen_tcp(const std::string& host, std::uint16_t port);

enum class ReadStatus { Ok, Closed, IdleTimeout, Truncated, Oversize, Error };

/// Waits up to `idle` for a frame to start (negative waits forever), then up
/// to `frame` for the rest of it. Closed means EOF before any byte;
/// Truncated means EOF or `frame` expiry part way through.
ReadStatus read_frame(int fd, std::string& payload, std::chrono::milliseconds idle, std::chrono::milliseconds frame);

/// False on error or timeout.
bool write_all(int fd, std::string_view data, std::chrono::milliseconds timeout);

}  // namespace parlogue::compilesvc
