// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/modarith.hpp"

#include <algorithm>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::fhe {

u64 pow_mod(u64 base, u64 exp, u64 q) {
  u64 result = 1 % q;
  base %= q;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return result;
}

u64 inv_mod(u64 a, u64 q) {
  if (a % q == 0) throw DomainError("inv_mod: zero has no inverse");
  return pow_mod(a, q - 2, q);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kSmall) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : kSmall) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 primitive_root_2n(u64 n, u64 q) {
  const u64 order = 2 * n;
  if ((q - 1) % order != 0) {
    throw ParameterError("modulus " + std::to_string(q) + " is not 1 mod " +
                         std::to_string(order));
  }
  for (u64 x = 2; x < q; ++x) {
    u64 g = pow_mod(x, (q - 1) / order, q);
    // Order exactly 2n iff g^n == -1.
    if (pow_mod(g, n, q) == q - 1) return g;
  }
  throw ParameterError("no primitive 2n-th root of unity modulo " + std::to_string(q));
}

std::vector<u64> ntt_primes_above(int bits, u64 n, std::size_t count,
                                  const std::vector<u64>& exclude) {
  if (bits < 2 || bits >= kMaxModulusBits) {
    throw ParameterError("prime bit size must lie in [2, " +
                         std::to_string(kMaxModulusBits) + ")");
  }
  const u64 step = 2 * n;
  const u64 base = u64{1} << bits;
  std::vector<u64> out;
  u64 start = (base / step) * step + 1;
  if (start <= base) start += step;
  for (u64 q = start; out.size() < count; q += step) {
    if (q >= (u64{1} << kMaxModulusBits)) throw ParameterError("ran out of NTT primes");
    if (is_prime(q) && std::find(exclude.begin(), exclude.end(), q) == exclude.end()) {
      out.push_back(q);
    }
  }
  return out;
}

}  // namespace qfl::fhe
