// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "qfl/fhe/params.hpp"
#include "qfl/fhe/ring_poly.hpp"

namespace qfl::fhe {

/// RLWE pair (c0, c1) decrypting to c0 + c1*s. Both halves are kept in
/// coefficient form over the primes of `level`.
struct Ciphertext {
  RingPoly c0, c1;
  double scale = 0.0;
  std::size_t level = 0;
  std::uint64_t params_digest = 0;

  bool operator==(const Ciphertext&) const = default;
};

/// Encryption of zero (b = -a*s + e, a), NTT form over the full chain.
struct PublicKey {
  RingPoly b, a;
  bool operator==(const PublicKey&) const = default;
};

/// Key-switching key from sigma_g(s) to s, one (b, a) pair per chain prime.
/// Each pair is in NTT form over the chain primes followed by the special prime.
struct GaloisKey {
  std::size_t step = 0;
  std::size_t galois_elt = 0;
  std::vector<RingPoly> b;
  std::vector<RingPoly> a;
  bool operator==(const GaloisKey&) const = default;
};

/// Everything required to encrypt and evaluate. Holds no secret material and
/// is the only key type the aggregation server ever sees.
struct PublicKeyMaterial {
  EncryptionParams params;
  PublicKey public_key;
  std::map<std::size_t, GaloisKey> galois_keys;

  bool operator==(const PublicKeyMaterial&) const = default;
};

/// 5^step mod 2N: the automorphism that rotates slots left by `step`.
std::size_t galois_element_for_step(std::size_t step, std::size_t ring_degree);

}  // namespace qfl::fhe
