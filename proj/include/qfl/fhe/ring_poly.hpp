// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfl/fhe/modarith.hpp"

namespace qfl::fhe {

enum class PolyDomain : std::uint8_t { kCoefficient = 0, kNtt = 1 };

/// Element of Z_Q[X]/(X^N + 1) in RNS form: one residue row per prime.
class RingPoly {
 public:
  RingPoly() = default;
  RingPoly(std::size_t degree, std::vector<u64> moduli,
           PolyDomain domain = PolyDomain::kCoefficient);

  std::size_t degree() const { return degree_; }
  std::size_t prime_count() const { return moduli_.size(); }
  const std::vector<u64>& moduli() const { return moduli_; }
  PolyDomain domain() const { return domain_; }
  void set_domain(PolyDomain d) { domain_ = d; }

  std::span<u64> residues(std::size_t prime_index) {
    return {data_.data() + prime_index * degree_, degree_};
  }
  std::span<const u64> residues(std::size_t prime_index) const {
    return {data_.data() + prime_index * degree_, degree_};
  }
  const std::vector<u64>& data() const { return data_; }

  /// Lift signed integer coefficients into every residue row.
  static RingPoly from_signed(std::span<const std::int64_t> coeffs, std::vector<u64> moduli);

  /// Copy restricted to the listed residue rows (in order).
  RingPoly select(std::span<const std::size_t> prime_indices) const;
  /// Copy keeping the leading `count` residue rows.
  RingPoly prefix(std::size_t count) const;

  bool operator==(const RingPoly&) const = default;

 private:
  std::size_t degree_ = 0;
  std::vector<u64> moduli_;
  PolyDomain domain_ = PolyDomain::kCoefficient;
  std::vector<u64> data_;
};

// Elementwise ring arithmetic. Operands must agree on degree, moduli and domain.
RingPoly operator+(const RingPoly& a, const RingPoly& b);
RingPoly operator-(const RingPoly& a, const RingPoly& b);
RingPoly operator-(const RingPoly& a);
RingPoly& operator+=(RingPoly& a, const RingPoly& b);

/// Slotwise product; both operands must be in NTT form.
RingPoly pointwise_mul(const RingPoly& a, const RingPoly& b);

/// Negacyclic product through the NTT, for operands in either (matching) domain.
/// The result keeps the operands' domain.
RingPoly ring_mul(const RingPoly& a, const RingPoly& b);

/// X -> X^galois_elt on a coefficient-domain polynomial; galois_elt must be odd.
RingPoly apply_galois(const RingPoly& p, std::size_t galois_elt);

}  // namespace qfl::fhe
