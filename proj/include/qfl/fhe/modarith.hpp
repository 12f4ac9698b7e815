// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace qfl::fhe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// All moduli are < 2^62 so that a + b never overflows before reduction.
inline constexpr int kMaxModulusBits = 62;

inline u64 add_mod(u64 a, u64 b, u64 q) {
  u64 s = a + b;
  return s >= q ? s - q : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 q) { return a >= b ? a - b : a + q - b; }

inline u64 neg_mod(u64 a, u64 q) { return a == 0 ? 0 : q - a; }

inline u64 mul_mod(u64 a, u64 b, u64 q) {
  return static_cast<u64>(static_cast<u128>(a) * b % q);
}

/// Precomputed floor(w * 2^64 / q) for Shoup multiplication by a fixed w.
inline u64 shoup_precompute(u64 w, u64 q) {
  return static_cast<u64>((static_cast<u128>(w) << 64) / q);
}

/// a * w mod q with w_shoup = shoup_precompute(w, q). Requires a < q.
inline u64 mul_mod_shoup(u64 a, u64 w, u64 w_shoup, u64 q) {
  u64 hi = static_cast<u64>((static_cast<u128>(a) * w_shoup) >> 64);
  u64 r = a * w - hi * q;
  return r >= q ? r - q : r;
}

u64 pow_mod(u64 base, u64 exp, u64 q);

/// Inverse modulo a prime q (Fermat). Throws DomainError when a ≡ 0.
u64 inv_mod(u64 a, u64 q);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(u64 n);

/// Reduce a signed value into [0, q).
inline u64 reduce_signed(std::int64_t v, u64 q) {
  if (v >= 0) return static_cast<u64>(v) % q;
  u64 r = static_cast<u64>(-(v + 1)) % q;  // avoids overflow at INT64_MIN
  return q - 1 - r;
}

/// Centered lift of a residue into (-q/2, q/2].
inline std::int64_t center(u64 r, u64 q) {
  return r > q / 2 ? -static_cast<std::int64_t>(q - r) : static_cast<std::int64_t>(r);
}

/// Primitive 2n-th root of unity modulo q; requires q ≡ 1 (mod 2n).
u64 primitive_root_2n(u64 n, u64 q);

/// Smallest `count` primes q > 2^bits with q ≡ 1 (mod 2n), skipping any listed in `exclude`.
std::vector<u64> ntt_primes_above(int bits, u64 n, std::size_t count,
                                  const std::vector<u64>& exclude = {});

}  // namespace qfl::fhe
