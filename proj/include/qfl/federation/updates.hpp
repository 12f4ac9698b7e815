// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "qfl/bytes.hpp"
#include "qfl/fhe/ciphertext.hpp"
#include "qfl/fhe/params.hpp"

namespace qfl::federation {

/// Encrypted, quantized flattened model from one client.
struct ClientUpdate {
  int client_id = 0;
  int round_index = 0;
  std::size_t sample_count = 0;
  std::size_t parameter_count = 0;
  std::vector<fhe::Ciphertext> ciphertexts;  // chunk i holds values [i*slots, (i+1)*slots)
};

/// Plaintext-arm counterpart of ClientUpdate.
struct PlainUpdate {
  int client_id = 0;
  int round_index = 0;
  std::size_t sample_count = 0;
  std::vector<double> values;
};

/// Aggregated global model as the server hands it back.
struct EncryptedGlobal {
  int round_index = 0;
  std::size_t parameter_count = 0;
  std::vector<fhe::Ciphertext> ciphertexts;
};

std::size_t chunk_count(std::size_t parameter_count, std::size_t slot_count);

/// Throws AlignmentError unless the chunking covers parameter_count.
void check_chunking(const ClientUpdate& update, const fhe::EncryptionParams& params);

// Wire bodies (little-endian, after the frame header).
void write_update(const ClientUpdate& update, Bytes& out);
ClientUpdate read_update(ByteReader& in);
void write_update(const PlainUpdate& update, Bytes& out);
PlainUpdate read_plain_update(ByteReader& in);
void write_global(const EncryptedGlobal& global, Bytes& out);
EncryptedGlobal read_global(ByteReader& in);

}  // namespace qfl::federation
