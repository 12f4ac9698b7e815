// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "qfl/federation/protocol.hpp"

namespace qfl::federation {

using Millis = std::chrono::milliseconds;

/// Bidirectional, ordered frame channel. receive() throws ProtocolError on
/// timeout, a closed peer or a malformed frame.
class Connection {
 public:
  virtual ~Connection() = default;
  virtual void send(const Frame& frame) = 0;
  virtual Frame receive(Millis timeout) = 0;
  /// Writes pre-encoded bytes verbatim. Used for fault injection.
  virtual void send_raw(std::span<const std::uint8_t> bytes) = 0;
  virtual void close() = 0;
};

enum class TransportKind { kLoopback, kSocket };
const char* to_string(TransportKind kind);

/// In-process pair backed by byte queues; frames still go through encode/decode.
std::pair<std::unique_ptr<Connection>, std::unique_ptr<Connection>> make_loopback_pair(
    std::size_t max_frame_bytes = kDefaultMaxFrameBytes);

/// TCP listener bound to 127.0.0.1. Port 0 picks an ephemeral port.
class SocketListener {
 public:
  explicit SocketListener(std::uint16_t port = 0,
                          std::size_t max_frame_bytes = kDefaultMaxFrameBytes);
  ~SocketListener();
  SocketListener(const SocketListener&) = delete;
  SocketListener& operator=(const SocketListener&) = delete;

  std::uint16_t port() const { return port_; }
  std::unique_ptr<Connection> accept(Millis timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
  std::size_t max_frame_bytes_;
};

std::unique_ptr<Connection> connect_socket(const std::string& host, std::uint16_t port,
                                           Millis timeout,
                                           std::size_t max_frame_bytes = kDefaultMaxFrameBytes);

}  // namespace qfl::federation
