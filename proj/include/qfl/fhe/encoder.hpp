// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfl/fhe/params.hpp"
#include "qfl/fhe/ring_poly.hpp"

namespace qfl::fhe {

/// Encoded slot vector, coefficient domain over the primes of `level`.
struct Plaintext {
  RingPoly poly;
  double scale = 0.0;
  std::size_t level = 0;
  std::uint64_t params_digest = 0;
};

/// Canonical-embedding encode of up to slot_count reals at params.scale.
/// Shorter inputs are zero-padded.
Plaintext encode(std::span<const double> values, const EncryptionParams& params, std::size_t level);
Plaintext encode(std::span<const double> values, const EncryptionParams& params, std::size_t level,
                 double scale);

/// Same value in every slot.
Plaintext encode_constant(double value, const EncryptionParams& params, std::size_t level);

/// First `count` slots divided by pt.scale.
std::vector<double> decode(const Plaintext& pt, std::size_t count);

/// Signed coefficients of the centered CRT lift, as doubles. Exact whenever
/// the coefficient magnitude is below 2^53.
std::vector<double> centered_coefficients(const RingPoly& poly);

}  // namespace qfl::fhe
