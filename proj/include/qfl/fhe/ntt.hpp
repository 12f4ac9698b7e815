// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qfl/fhe/modarith.hpp"
#include "qfl/fhe/ring_poly.hpp"

namespace qfl::fhe {

/// Twiddle tables for the negacyclic NTT of length n modulo q. Forward output
/// is in bit-reversed order; pointwise products in that order correspond to
/// multiplication modulo X^n + 1.
class NttTable {
 public:
  NttTable(std::size_t n, u64 q);

  /// Shared, lazily built table. Thread-safe.
  static std::shared_ptr<const NttTable> get(std::size_t n, u64 q);

  void forward(std::span<u64> a) const;
  void inverse(std::span<u64> a) const;

  std::size_t size() const { return n_; }
  u64 modulus() const { return q_; }

 private:
  std::size_t n_;
  u64 q_;
  std::vector<u64> psi_rev_, psi_rev_shoup_;
  std::vector<u64> psi_inv_rev_, psi_inv_rev_shoup_;
  u64 n_inv_, n_inv_shoup_;
};

RingPoly ntt_forward(const RingPoly& p);
RingPoly ntt_inverse(const RingPoly& p);
void ntt_forward_inplace(RingPoly& p);
void ntt_inverse_inplace(RingPoly& p);

}  // namespace qfl::fhe
