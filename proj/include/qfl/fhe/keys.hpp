// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Marks translation units that can reach secret-key operations.
#define QFL_FHE_SECRET_API 1

// Secret-key side of the scheme. Code that must stay blind to plaintext
// (the aggregation server) never includes this header or links qfl_fhe_secret.

#include <cstdint>
#include <set>

#include "qfl/fhe/ciphertext.hpp"
#include "qfl/fhe/evaluator.hpp"

namespace qfl::fhe {

/// Ternary secret s, coefficient form over the chain primes plus the special prime.
struct SecretKey {
  RingPoly s;
  bool operator==(const SecretKey&) const = default;
};

class KeyMaterial {
 public:
  KeyMaterial(SecretKey secret, PublicKeyMaterial pub)
      : secret_(std::move(secret)), public_(std::move(pub)) {}

  const EncryptionParams& params() const { return public_.params; }
  const SecretKey& secret_key() const { return secret_; }
  const PublicKey& public_key() const { return public_.public_key; }
  const std::map<std::size_t, GaloisKey>& galois_keys() const { return public_.galois_keys; }

  /// The part that may be handed to an untrusted evaluator.
  const PublicKeyMaterial& public_material() const { return public_; }

  bool operator==(const KeyMaterial&) const = default;

 private:
  SecretKey secret_;
  PublicKeyMaterial public_;
};

/// Generates secret, public and one Galois key per step in `rotation_steps`
/// (each in [1, slot_count)). Deterministic in `rng_seed`.
KeyMaterial keygen(const EncryptionParams& params, const std::set<std::size_t>& rotation_steps,
                   std::uint64_t rng_seed);

inline Ciphertext encrypt(const Plaintext& pt, const KeyMaterial& keys, std::uint64_t rng_seed) {
  return encrypt(pt, keys.public_material(), rng_seed);
}

inline Ciphertext rotate(const Ciphertext& ct, long step, const KeyMaterial& keys) {
  return rotate(ct, step, keys.public_material());
}

}  // namespace qfl::fhe
