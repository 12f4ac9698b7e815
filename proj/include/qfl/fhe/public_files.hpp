// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "qfl/fhe/ciphertext.hpp"
#include "qfl/fhe/params.hpp"

namespace qfl::fhe {

inline constexpr const char* kParamsFile = "params.json";
inline constexpr const char* kPublicKeyFile = "public.key";
inline constexpr const char* kGaloisKeyFile = "galois.key";

/// {"ring_degree", "modulus_chain", "special_prime", "scale", "digest"}.
std::string params_to_json(const EncryptionParams& params);
/// Throws FormatError on bad JSON or a digest that does not match.
EncryptionParams params_from_json(const std::string& text);

void write_params_file(const EncryptionParams& params, const std::filesystem::path& path);
EncryptionParams read_params_file(const std::filesystem::path& path);

/// params.json, public.key and galois.key from a key directory.
PublicKeyMaterial load_public_material(const std::filesystem::path& dir);

}  // namespace qfl::fhe
