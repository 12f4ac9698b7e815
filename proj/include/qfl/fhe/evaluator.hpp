// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "qfl/fhe/ciphertext.hpp"
#include "qfl/fhe/encoder.hpp"

namespace qfl::fhe {

/// Public-key encryption at pt.level. Deterministic in `rng_seed`.
Ciphertext encrypt(const Plaintext& pt, const PublicKeyMaterial& keys, std::uint64_t rng_seed);

/// Slotwise sum. Operands must share level and scale (relative tolerance 2^-30).
Ciphertext add_ct(const Ciphertext& a, const Ciphertext& b);

/// Slotwise product with an encoded plaintext at the same level; scales multiply.
Ciphertext mul_plain(const Ciphertext& ct, const Plaintext& pt);

/// Drops the top prime of the chain and divides the scale by it.
Ciphertext rescale(const Ciphertext& ct);

/// Cyclic left rotation of the slot vector. Step 0 (mod slot_count) needs no key.
Ciphertext rotate(const Ciphertext& ct, long step, const PublicKeyMaterial& keys);

}  // namespace qfl::fhe
