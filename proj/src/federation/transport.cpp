// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "qfl/errors.hpp"

namespace qfl::federation {

const char* to_string(TransportKind kind) {
  return kind == TransportKind::kLoopback ? "loopback" : "socket";
}

namespace {

using Clock = std::chrono::steady_clock;

// One direction of a loopback pair.
struct ByteQueue {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::uint8_t> bytes;
  bool closed = false;

  void push(std::span<const std::uint8_t> data) {
    {
      std::lock_guard lock(mu);
      if (closed) throw ProtocolError("send on closed loopback connection");
      bytes.insert(bytes.end(), data.begin(), data.end());
    }
    cv.notify_all();
  }

  Bytes pop(std::size_t n, Clock::time_point deadline) {
    std::unique_lock lock(mu);
    if (!cv.wait_until(lock, deadline, [&] { return bytes.size() >= n || closed; })) {
      throw ProtocolError("receive timed out");
    }
    if (bytes.size() < n) throw ProtocolError("peer closed the connection");
    Bytes out(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n));
    bytes.erase(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
  }

  void close() {
    {
      std::lock_guard lock(mu);
      closed = true;
    }
    cv.notify_all();
  }
};

class LoopbackConnection final : public Connection {
 public:
  LoopbackConnection(std::shared_ptr<ByteQueue> in, std::shared_ptr<ByteQueue> out, std::size_t max)
      : in_(std::move(in)), out_(std::move(out)), max_(max) {}
  ~LoopbackConnection() override { close(); }

  void send(const Frame& frame) override { out_->push(encode_frame(frame)); }
  void send_raw(std::span<const std::uint8_t> bytes) override { out_->push(bytes); }

  Frame receive(Millis timeout) override {
    const auto deadline = Clock::now() + timeout;
    const Bytes prefix = in_->pop(4, deadline);
    const std::uint32_t length = check_frame_length(
        (std::uint32_t{prefix[0]} << 24) | (std::uint32_t{prefix[1]} << 16) |
            (std::uint32_t{prefix[2]} << 8) | prefix[3],
        max_);
    return decode_frame_body(in_->pop(length, deadline));
  }

  void close() override {
    in_->close();
    out_->close();
  }

 private:
  std::shared_ptr<ByteQueue> in_, out_;
  std::size_t max_;
};

[[noreturn]] void throw_errno(const std::string& what) {
  throw ProtocolError(what + ": " + std::strerror(errno));
}

class SocketConnection final : public Connection {
 public:
  SocketConnection(int fd, std::size_t max) : fd_(fd), max_(max) {
    const int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  }
  ~SocketConnection() override { close(); }

  void send(const Frame& frame) override { send_raw(encode_frame(frame)); }

  void send_raw(std::span<const std::uint8_t> bytes) override {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
      const ssize_t n = ::send(fd_, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("socket send failed");
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  Frame receive(Millis timeout) override {
    const auto deadline = Clock::now() + timeout;
    std::uint8_t prefix[4];
    read_exact(prefix, 4, deadline);
    const std::uint32_t length = check_frame_length(
        (std::uint32_t{prefix[0]} << 24) | (std::uint32_t{prefix[1]} << 16) |
            (std::uint32_t{prefix[2]} << 8) | prefix[3],
        max_);
    Bytes body(length);
    read_exact(body.data(), length, deadline);
    return decode_frame_body(body);
  }

  void close() override {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  void read_exact(std::uint8_t* dst, std::size_t n, Clock::time_point deadline) {
    if (fd_ < 0) throw ProtocolError("receive on closed socket");
    std::size_t got = 0;
    while (got < n) {
      const auto left = std::chrono::duration_cast<Millis>(deadline - Clock::now()).count();
      if (left <= 0) throw ProtocolError("receive timed out");
      pollfd p{fd_, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw_errno("poll failed");
      }
      if (r == 0) throw ProtocolError("receive timed out");
      const ssize_t k = ::recv(fd_, dst + got, n - got, 0);
      if (k == 0) throw ProtocolError("peer closed the connection");
      if (k < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw_errno("socket receive failed");
      }
      got += static_cast<std::size_t>(k);
    }
  }

  int fd_;
  std::size_t max_;
};

}  // namespace

std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_loopback_pair(
    std::size_t max_frame_bytes) {
  auto a_to_b = std::make_shared<ByteQueue>();
  auto b_to_a = std::make_shared<ByteQueue>();
  return {std::make_unique<LoopbackConnection>(b_to_a, a_to_b, max_frame_bytes),
          std::make_unique<LoopbackConnection>(a_to_b, b_to_a, max_frame_bytes)};
}

SocketListener::SocketListener(std::uint16_t port, std::size_t max_frame_bytes)
    : max_frame_bytes_(max_frame_bytes) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw_errno("socket() failed");
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 64) < 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    throw_errno("cannot listen on 127.0.0.1:" + std::to_string(port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

SocketListener::~SocketListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Connection> SocketListener::accept(Millis timeout) {
  pollfd p{fd_, POLLIN, 0};
  int r;
  do {
    r = ::poll(&p, 1, static_cast<int>(timeout.count()));
  } while (r < 0 && errno == EINTR);
  if (r == 0) throw ProtocolError("timed out waiting for a client to connect");
  if (r < 0) throw_errno("poll failed");
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) throw_errno("accept failed");
  return std::make_unique<SocketConnection>(fd, max_frame_bytes_);
}

std::unique_ptr<Connection> connect_socket(const std::string& host, std::uint16_t port,
                                           Millis timeout, std::size_t max_frame_bytes) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw ProtocolError("not an IPv4 address: " + host);
  }
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw_errno("socket() failed");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) {
      return std::make_unique<SocketConnection>(fd, max_frame_bytes);
    }
    const int saved = errno;
    ::close(fd);
    if (Clock::now() >= deadline) {
      errno = saved;
      throw_errno("cannot connect to " + host + ":" + std::to_string(port));
    }
    ::usleep(10000);
  }
}

}  // namespace qfl::federation
