// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Marks translation units that can reach secret-key operations.
#define QFL_FHE_SECRET_API 1

#include "qfl/fhe/keys.hpp"

namespace qfl::fhe {

/// c0 + c1*s at ct.level and ct.scale.
Plaintext decrypt(const Ciphertext& ct, const KeyMaterial& keys);
Plaintext decrypt(const Ciphertext& ct, const SecretKey& secret, const EncryptionParams& params);

}  // namespace qfl::fhe
