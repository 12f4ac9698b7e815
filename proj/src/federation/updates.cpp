// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/updates.hpp"

#include <string>

#include "qfl/errors.hpp"
#include "qfl/federation/vector_format.hpp"
#include "qfl/fhe/serialization.hpp"

namespace qfl::federation {

std::size_t chunk_count(std::size_t parameter_count, std::size_t slot_count) {
  if (slot_count == 0) throw ParameterError("chunk_count: zero slots");
  return (parameter_count + slot_count - 1) / slot_count;
}

void check_chunking(const ClientUpdate& update, const fhe::EncryptionParams& params) {
  const std::size_t need = chunk_count(update.parameter_count, params.slot_count());
  if (update.ciphertexts.size() != need) {
    throw AlignmentError("client " + std::to_string(update.client_id) + " sent " +
                         std::to_string(update.ciphertexts.size()) + " chunks, expected " +
                         std::to_string(need) + " for " + std::to_string(update.parameter_count) +
                         " parameters");
  }
}

namespace {

void write_chunks(const std::vector<fhe::Ciphertext>& cts, Bytes& out) {
  ByteWriter w(out);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(cts.size()));
  for (const auto& ct : cts) fhe::write_ciphertext(ct, out);
}

std::vector<fhe::Ciphertext> read_chunks(ByteReader& in) {
  const auto n = in.le<std::uint32_t>();
  // Each record is far larger than 16 bytes; reject absurd counts before allocating.
  if (n > in.remaining() / 16) throw FormatError("chunk count exceeds payload size");
  std::vector<fhe::Ciphertext> cts;
  cts.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) cts.push_back(fhe::read_ciphertext(in));
  return cts;
}

void expect_done(const ByteReader& in, const char* what) {
  if (!in.done()) throw FormatError(std::string(what) + ": trailing bytes");
}

}  // namespace

// client u32 | samples u64 | params u64 | chunks u32 | CKV1 records
void write_update(const ClientUpdate& update, Bytes& out) {
  ByteWriter w(out);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(update.client_id));
  w.le<std::uint64_t>(update.sample_count);
  w.le<std::uint64_t>(update.parameter_count);
  write_chunks(update.ciphertexts, out);
}

ClientUpdate read_update(ByteReader& in) {
  ClientUpdate u;
  u.client_id = static_cast<int>(in.le<std::uint32_t>());
  u.sample_count = in.le<std::uint64_t>();
  u.parameter_count = in.le<std::uint64_t>();
  u.ciphertexts = read_chunks(in);
  expect_done(in, "update");
  return u;
}

// client u32 | samples u64 | PVF1
void write_update(const PlainUpdate& update, Bytes& out) {
  ByteWriter w(out);
  w.le<std::uint32_t>(static_cast<std::uint32_t>(update.client_id));
  w.le<std::uint64_t>(update.sample_count);
  write_vector(update.values, out);
}

PlainUpdate read_plain_update(ByteReader& in) {
  PlainUpdate u;
  u.client_id = static_cast<int>(in.le<std::uint32_t>());
  u.sample_count = in.le<std::uint64_t>();
  u.values = read_vector(in);
  expect_done(in, "update");
  return u;
}

// params u64 | chunks u32 | CKV1 records
void write_global(const EncryptedGlobal& global, Bytes& out) {
  ByteWriter w(out);
  w.le<std::uint64_t>(global.parameter_count);
  write_chunks(global.ciphertexts, out);
}

EncryptedGlobal read_global(ByteReader& in) {
  EncryptedGlobal g;
  g.parameter_count = in.le<std::uint64_t>();
  g.ciphertexts = read_chunks(in);
  expect_done(in, "global");
  return g;
}

}  // namespace qfl::federation
