#include "parlogue/compilesvc/socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "parlogue/compilesvc/protocol.hpp"

namespace parlogue::compilesvc {

using Clock = std::chrono::steady_clock;

Fd& Fd::operator=(Fd&& o) noexcept {
  if (this != &o) {
    reset();
    fd_ = std::exchange(o.fd_, -1);
  }
  return *this;
}

void Fd::reset() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

std::pair<std::string, std::uint16_t> parse_host_port(std::string_view addr) {
  auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw std::invalid_argument("expected host:port, got '" + std::string(addr) + "'");
  auto port_text = addr.substr(colon + 1);
  unsigned port = 0;
  auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || p != port_text.data() + port_text.size() || port > 65535) {
    throw std::invalid_argument("bad port in '" + std::string(addr) + "'");
  }
  return {std::string(addr.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

namespace {

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  auto service = std::to_string(port);
  int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
  if (rc != 0) throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  return res;
}

int remaining_ms(Clock::time_point deadline) {
  auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left < 0 ? 0 : static_cast<int>(left);
}

// 1 ready, 0 timeout, -1 error. A negative `ms` waits forever.
int wait_fd(int fd, short events, int ms) {
  pollfd p{fd, events, 0};
  for (;;) {
    int rc = ::poll(&p, 1, ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) return -1;
    return rc;
  }
}

enum class Chunk { Ok, Eof, Timeout, Error };

Chunk read_exact(int fd, char* buf, std::size_t n, Clock::time_point deadline, bool forever) {
  std::size_t got = 0;
  while (got < n) {
    int w = wait_fd(fd, POLLIN, forever ? -1 : remaining_ms(deadline));
    if (w == 0) return Chunk::Timeout;
    if (w < 0) return Chunk::Error;
    ssize_t r = ::recv(fd, buf + got, n - got, 0);
    if (r == 0) return Chunk::Eof;
    if (r < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return Chunk::Error;
    }
    got += static_cast<std::size_t>(r);
  }
  return Chunk::Ok;
}

}  // namespace

Fd connect_tcp(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
  addrinfo* res = resolve(host, port, false);
  std::string last = "no address";
  for (auto* ai = res; ai; ai = ai->ai_next) {
    Fd fd(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
    if (!fd.valid()) continue;
    int flags = ::fcntl(fd.get(), F_GETFL, 0);
    ::fcntl(fd.get(), F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd.get(), ai->ai_addr, ai->ai_addrlen);
    if (rc < 0 && errno == EINPROGRESS) {
      if (wait_fd(fd.get(), POLLOUT, static_cast<int>(timeout.count())) != 1) {
        last = "connect timed out";
        continue;
      }
      int err = 0;
      socklen_t len = sizeof err;
      ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
      rc = err == 0 ? 0 : -1;
      errno = err;
    }
    if (rc != 0) {
      last = std::strerror(errno);
      continue;
    }
    ::fcntl(fd.get(), F_SETFL, flags);
    int one = 1;
    ::setsockopt(fd.get(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    ::freeaddrinfo(res);
    return fd;
  }
  ::freeaddrinfo(res);
  throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " + last);
}

std::pair<Fd, std::uint16_t> listen_tcp(const std::string& host, std::uint16_t port) {
  addrinfo* res = resolve(host, port, true);
  Fd fd(::socket(res->ai_family, res->ai_socktype | SOCK_CLOEXEC, res->ai_protocol));
  if (!fd.valid()) {
    ::freeaddrinfo(res);
    throw TransportError(std::string("socket: ") + std::strerror(errno));
  }
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd.get(), res->ai_addr, res->ai_addrlen) != 0) {
    std::string msg = std::strerror(errno);
    ::freeaddrinfo(res);
    throw TransportError("cannot bind " + host + ":" + std::to_string(port) + ": " + msg);
  }
  ::freeaddrinfo(res);
  if (::listen(fd.get(), 64) != 0) throw TransportError(std::string("listen: ") + std::strerror(errno));
  sockaddr_in bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&bound), &len);
  return {std::move(fd), ntohs(bound.sin_port)};
}

ReadStatus read_frame(int fd, std::string& payload, std::chrono::milliseconds idle, std::chrono::milliseconds frame) {
  unsigned char header[4];
  bool forever = idle.count() < 0;
  auto idle_deadline = Clock::now() + (forever ? std::chrono::milliseconds(0) : idle);
  // First byte under the idle budget, the rest under the frame budget.
  switch (read_exact(fd, reinterpret_cast<char*>(header), 1, idle_deadline, forever)) {
    case Chunk::Ok: break;
    case Chunk::Eof: return ReadStatus::Closed;
    case Chunk::Timeout: return ReadStatus::IdleTimeout;
    case Chunk::Error: return ReadStatus::Error;
  }
  auto deadline = Clock::now() + frame;
  auto more = read_exact(fd, reinterpret_cast<char*>(header) + 1, 3, deadline, false);
  if (more == Chunk::Error) return ReadStatus::Error;
  if (more != Chunk::Ok) return ReadStatus::Truncated;
  auto n = decode_length(header);
  if (n > kMaxFrame) return ReadStatus::Oversize;
  payload.assign(n, '\0');
  auto body = read_exact(fd, payload.data(), n, deadline, false);
  if (body == Chunk::Error) return ReadStatus::Error;
  if (body != Chunk::Ok) return ReadStatus::Truncated;
  return ReadStatus::Ok;
}

bool write_all(int fd, std::string_view data, std::chrono::milliseconds timeout) {
  auto deadline = Clock::now() + timeout;
  std::size_t sent = 0;
  while (sent < data.size()) {
    if (wait_fd(fd, POLLOUT, remaining_ms(deadline)) != 1) return false;
    ssize_t w = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return false;
    }
    sent += static_cast<std::size_t>(w);
  }
  return true;
}

}  // namespace parlogue::compilesvc
