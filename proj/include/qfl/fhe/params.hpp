// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qfl/fhe/modarith.hpp"

namespace qfl::fhe {

/// CKKS parameter set. `modulus_chain[0]` is the base prime that survives every
/// rescale; the last entry is dropped first. `special_prime` is used only by
/// key switching and never holds ciphertext data.
///
/// These parameters are sized for correctness demonstrations; they have not
/// been checked against any lattice security estimator.
struct EncryptionParams {
  std::size_t ring_degree = 0;
  std::vector<u64> modulus_chain;
  double scale = 0.0;
  u64 special_prime = 0;

  std::size_t slot_count() const { return ring_degree / 2; }
  std::size_t max_level() const { return modulus_chain.size() - 1; }

  /// Throws ParameterError naming the first violated invariant.
  void validate() const;

  /// FNV-1a over every field; identifies the parameter set inside serialized objects.
  std::uint64_t digest() const;

  /// Generates the chain from bit sizes: for each entry, the smallest unused
  /// NTT-friendly prime above 2^bits. The special prime sits above every chain prime.
  static EncryptionParams create(std::size_t ring_degree, const std::vector<int>& prime_bits,
                                 int scale_bits);

  /// N = 4096, chain {60, 40, 40} bits, scale 2^40.
  static EncryptionParams defaults();

  bool operator==(const EncryptionParams&) const = default;
};

}  // namespace qfl::fhe
