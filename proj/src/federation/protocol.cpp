// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/protocol.hpp"

#include <limits>
#include <string_view>

#include "qfl/errors.hpp"

namespace qfl::federation {

const char* to_string(MessageType type) {
  switch (type) {
    case MessageType::kJoin: return "JOIN";
    case MessageType::kUpdate: return "UPDATE";
    case MessageType::kGlobal: return "GLOBAL";
    case MessageType::kMetrics: return "METRICS";
    case MessageType::kAbort: return "ABORT";
  }
  return "UNKNOWN";
}

Bytes encode_frame(const Frame& frame) {
  const std::size_t body = 3 + frame.payload.size();
  if (body > std::numeric_limits<std::uint32_t>::max()) {
    throw ProtocolError("frame payload too large to encode");
  }
  Bytes out;
  out.reserve(4 + body);
  ByteWriter w(out);
  w.be<std::uint32_t>(static_cast<std::uint32_t>(body));
  w.le<std::uint8_t>(static_cast<std::uint8_t>(frame.type));
  w.be<std::uint16_t>(frame.round);
  w.raw(frame.payload);
  return out;
}

std::uint32_t check_frame_length(std::uint32_t length, std::size_t max_frame_bytes) {
  if (length < 3) throw ProtocolError("frame length " + std::to_string(length) + " below header size");
  if (length > max_frame_bytes) {
    throw ProtocolError("frame length " + std::to_string(length) + " exceeds limit of " +
                        std::to_string(max_frame_bytes) + " bytes");
  }
  return length;
}

Frame decode_frame_body(std::span<const std::uint8_t> body) {
  if (body.size() < 3) throw ProtocolError("frame body shorter than its header");
  const auto type = body[0];
  if (type < static_cast<std::uint8_t>(MessageType::kJoin) ||
      type > static_cast<std::uint8_t>(MessageType::kAbort)) {
    throw ProtocolError("unknown message type " + std::to_string(type));
  }
  Frame f;
  f.type = static_cast<MessageType>(type);
  f.round = static_cast<std::uint16_t>((body[1] << 8) | body[2]);
  f.payload.assign(body.begin() + 3, body.end());
  return f;
}

Frame decode_frame(std::span<const std::uint8_t> bytes, std::size_t max_frame_bytes) {
  if (bytes.size() < 4) throw ProtocolError("frame shorter than its length prefix");
  ByteReader in(bytes);
  const auto length = check_frame_length(in.be<std::uint32_t>(), max_frame_bytes);
  if (length != in.remaining()) {
    throw ProtocolError("frame length " + std::to_string(length) + " does not match " +
                        std::to_string(in.remaining()) + " available bytes");
  }
  return decode_frame_body(bytes.subspan(4));
}

// client u32 | samples u64 | mode u8 | digest u64
Bytes encode_join(const JoinPayload& join) {
  Bytes out;
  ByteWriter w(out);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(join.client_id));
  w.le<std::uint64_t>(join.sample_count);
  w.le<std::uint8_t>(join.mode);
  w.le<std::uint64_t>(join.params_digest);
  return out;
}

JoinPayload decode_join(std::span<const std::uint8_t> payload) {
  try {
    ByteReader in(payload);
    JoinPayload j;
    j.client_id = static_cast<int>(in.le<std::uint32_t>());
    j.sample_count = in.le<std::uint64_t>();
    j.mode = in.le<std::uint8_t>();
    j.params_digest = in.le<std::uint64_t>();
    if (!in.done()) throw FormatError("trailing bytes");
    return j;
  } catch (const FormatError& e) {
    throw ProtocolError(std::string("malformed JOIN: ") + e.what());
  }
}

Frame abort_frame(std::uint16_t round, const std::string& reason) {
  Frame f;
  f.type = MessageType::kAbort;
  f.round = round;
  f.payload.assign(reason.begin(), reason.end());
  return f;
}

std::string abort_reason(const Frame& frame) {
  return std::string(frame.payload.begin(), frame.payload.end());
}

}  // namespace qfl::federation
