// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "qfl/fhe/keys.hpp"
#include "qfl/fhe/public_files.hpp"
#include "qfl/fhe/serialization.hpp"

namespace qfl::fhe {

inline constexpr const char* kSecretKeyFile = "secret.key";

Bytes serialize_secret_key(const KeyMaterial& keys);
SecretKey deserialize_secret_key(const EncryptionParams& params, std::span<const std::uint8_t> bytes);

/// Writes params.json, secret.key, public.key and galois.key into `dir` (created if absent).
void write_key_files(const KeyMaterial& keys, const std::filesystem::path& dir);
KeyMaterial load_key_material(const EncryptionParams& params, const std::filesystem::path& dir);
/// Parameters taken from the directory's params.json.
KeyMaterial load_key_material(const std::filesystem::path& dir);
PublicKeyMaterial load_public_material(const EncryptionParams& params,
                                       const std::filesystem::path& dir);

}  // namespace qfl::fhe
