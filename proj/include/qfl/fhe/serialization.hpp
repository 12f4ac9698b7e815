// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Binary record format shared by ciphertexts and key files. All integers are
// little-endian. See docs/protocol.md for the byte-level layout.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "qfl/bytes.hpp"
#include "qfl/fhe/ciphertext.hpp"

namespace qfl::fhe {

inline constexpr char kRecordMagic[4] = {'C', 'K', 'V', '1'};

enum class ObjectKind : std::uint8_t {
  kCiphertext = 1,
  kPublicKey = 2,
  kGaloisKey = 3,
  kSecretKey = 4,
};

const char* to_string(ObjectKind kind);

struct Record {
  ObjectKind kind = ObjectKind::kCiphertext;
  std::uint64_t params_digest = 0;
  std::uint8_t level = 0;
  double scale = 0.0;
  std::uint32_t ring_degree = 0;
  std::int32_t aux = 0;  // rotation step for Galois keys, 0 otherwise
  std::vector<RingPoly> polys;
};

void write_record(const Record& rec, Bytes& out);
/// Reads one record starting at the reader's cursor.
Record read_record(ByteReader& in);

Bytes serialize(const Ciphertext& ct);
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes);
Ciphertext read_ciphertext(ByteReader& in);
void write_ciphertext(const Ciphertext& ct, Bytes& out);

Bytes serialize_public_key(const PublicKeyMaterial& pub);
Bytes serialize_galois_keys(const PublicKeyMaterial& pub);

/// Rebuilds public material from the two key files; both must carry params.digest().
PublicKeyMaterial deserialize_public_material(const EncryptionParams& params,
                                              std::span<const std::uint8_t> public_key,
                                              std::span<const std::uint8_t> galois_keys);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace qfl::fhe
