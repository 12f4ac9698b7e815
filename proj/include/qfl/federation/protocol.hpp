// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "qfl/bytes.hpp"

namespace qfl::federation {

enum class MessageType : std::uint8_t {
  kJoin = 1,
  kUpdate = 2,
  kGlobal = 3,
  kMetrics = 4,
  kAbort = 5,
};

const char* to_string(MessageType type);

/// u32 BE length (bytes after the length field) | u8 type | u16 BE round | payload.
struct Frame {
  MessageType type = MessageType::kJoin;
  std::uint16_t round = 0;
  Bytes payload;

  bool operator==(const Frame&) const = default;
};

inline constexpr std::size_t kFrameHeaderSize = 7;
inline constexpr std::size_t kDefaultMaxFrameBytes = 64u << 20;

Bytes encode_frame(const Frame& frame);

/// Validates the body of a frame once its length prefix has been read.
/// Throws ProtocolError on unknown types or a short body.
Frame decode_frame_body(std::span<const std::uint8_t> body);

/// Throws ProtocolError for lengths outside [3, max_frame_bytes].
std::uint32_t check_frame_length(std::uint32_t length, std::size_t max_frame_bytes);

/// Whole-buffer decode; the buffer must hold exactly one frame.
Frame decode_frame(std::span<const std::uint8_t> bytes,
                   std::size_t max_frame_bytes = kDefaultMaxFrameBytes);

// Small payloads.
struct JoinPayload {
  int client_id = 0;
  std::size_t sample_count = 0;
  std::uint8_t mode = 0;  // Mode as integer
  std::uint64_t params_digest = 0;
};

Bytes encode_join(const JoinPayload& join);
JoinPayload decode_join(std::span<const std::uint8_t> payload);

/// GLOBAL payload: u8 flags | body. Bit 0 marks the final round.
inline constexpr std::uint8_t kGlobalFinal = 1;

Frame abort_frame(std::uint16_t round, const std::string& reason);
std::string abort_reason(const Frame& frame);

}  // namespace qfl::federation
