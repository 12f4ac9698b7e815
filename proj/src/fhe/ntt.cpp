// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/ntt.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "qfl/errors.hpp"

namespace qfl::fhe {
namespace {

std::size_t bit_reverse(std::size_t x, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

NttTable::NttTable(std::size_t n, u64 q) : n_(n), q_(q) {
  if (n < 2 || !std::has_single_bit(n)) {
    throw ParameterError("NTT length must be a power of two >= 2, got " + std::to_string(n));
  }
  const int log_n = std::countr_zero(n);
  const u64 psi = primitive_root_2n(n, q);
  const u64 psi_inv = inv_mod(psi, q);
  psi_rev_.resize(n);
  psi_inv_rev_.resize(n);
  psi_rev_shoup_.resize(n);
  psi_inv_rev_shoup_.resize(n);
  u64 pw = 1, pw_inv = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = bit_reverse(i, log_n);
    psi_rev_[j] = pw;
    psi_inv_rev_[j] = pw_inv;
    pw = mul_mod(pw, psi, q);
    pw_inv = mul_mod(pw_inv, psi_inv, q);
  }
  for (std::size_t i = 0; i < n; ++i) {
    psi_rev_shoup_[i] = shoup_precompute(psi_rev_[i], q);
    psi_inv_rev_shoup_[i] = shoup_precompute(psi_inv_rev_[i], q);
  }
  n_inv_ = inv_mod(n % q, q);
  n_inv_shoup_ = shoup_precompute(n_inv_, q);
}

std::shared_ptr<const NttTable> NttTable::get(std::size_t n, u64 q) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, u64>, std::shared_ptr<const NttTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{n, q}];
  if (!slot) slot = std::make_shared<const NttTable>(n, q);
  return slot;
}

// Cooley-Tukey butterflies merged with the psi twist.
void NttTable::forward(std::span<u64> a) const {
  const u64 q = q_;
  std::size_t t = n_;
  for (std::size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const u64 w = psi_rev_[m + i];
      const u64 ws = psi_rev_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = mul_mod_shoup(a[j + t], w, ws, q);
        a[j] = add_mod(u, v, q);
        a[j + t] = sub_mod(u, v, q);
      }
    }
  }
}

// Gentleman-Sande butterflies, then scale by n^-1.
void NttTable::inverse(std::span<u64> a) const {
  const u64 q = q_;
  std::size_t t = 1;
  for (std::size_t m = n_; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const u64 w = psi_inv_rev_[h + i];
      const u64 ws = psi_inv_rev_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        const u64 u = a[j];
        const u64 v = a[j + t];
        a[j] = add_mod(u, v, q);
        a[j + t] = mul_mod_shoup(sub_mod(u, v, q), w, ws, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = mul_mod_shoup(x, n_inv_, n_inv_shoup_, q);
}

void ntt_forward_inplace(RingPoly& p) {
  if (p.domain() != PolyDomain::kCoefficient) {
    throw DomainError("ntt_forward: polynomial is already in NTT form");
  }
  for (std::size_t i = 0; i < p.prime_count(); ++i) {
    NttTable::get(p.degree(), p.moduli()[i])->forward(p.residues(i));
  }
  p.set_domain(PolyDomain::kNtt);
}

void ntt_inverse_inplace(RingPoly& p) {
  if (p.domain() != PolyDomain::kNtt) {
    throw DomainError("ntt_inverse: polynomial is in coefficient form");
  }
  for (std::size_t i = 0; i < p.prime_count(); ++i) {
    NttTable::get(p.degree(), p.moduli()[i])->inverse(p.residues(i));
  }
  p.set_domain(PolyDomain::kCoefficient);
}

RingPoly ntt_forward(const RingPoly& p) {
  RingPoly out = p;
  ntt_forward_inplace(out);
  return out;
}

RingPoly ntt_inverse(const RingPoly& p) {
  RingPoly out = p;
  ntt_inverse_inplace(out);
  return out;
}

}  // namespace qfl::fhe
