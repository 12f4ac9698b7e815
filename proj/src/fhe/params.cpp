// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::fhe {
namespace {

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
}

void check_ntt_prime(u64 q, std::size_t n, const char* what) {
  if (q >= (u64{1} << kMaxModulusBits)) {
    throw ParameterError(std::string(what) + " " + std::to_string(q) + " exceeds 62 bits");
  }
  if (!is_prime(q)) throw ParameterError(std::string(what) + " " + std::to_string(q) + " is not prime");
  if (q % (2 * n) != 1) {
    throw ParameterError(std::string(what) + " " + std::to_string(q) + " is not 1 mod 2N");
  }
}

}  // namespace

void EncryptionParams::validate() const {
  if (ring_degree < 1024 || !std::has_single_bit(ring_degree)) {
    throw ParameterError("ring_degree must be a power of two >= 1024, got " +
                         std::to_string(ring_degree));
  }
  if (modulus_chain.size() < 2) {
    throw ParameterError("modulus_chain needs at least two primes (one rescale level)");
  }
  if (modulus_chain.size() > 255) throw ParameterError("modulus_chain longer than 255 primes");
  for (u64 q : modulus_chain) check_ntt_prime(q, ring_degree, "modulus_chain prime");
  auto sorted = modulus_chain;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParameterError("modulus_chain primes must be distinct");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("scale must be positive");
  int exp = 0;
  if (std::frexp(scale, &exp) != 0.5) throw ParameterError("scale must be a power of two");
  if (scale >= static_cast<double>(sorted.front())) {
    throw ParameterError("scale must be smaller than the smallest modulus_chain prime");
  }
  check_ntt_prime(special_prime, ring_degree, "special_prime");
  if (special_prime <= sorted.back()) {
    throw ParameterError("special_prime must exceed every modulus_chain prime");
  }
}

std::uint64_t EncryptionParams::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_mix(h, ring_degree);
  fnv_mix(h, modulus_chain.size());
  for (u64 q : modulus_chain) fnv_mix(h, q);
  fnv_mix(h, special_prime);
  std::uint64_t scale_bits = 0;
  std::memcpy(&scale_bits, &scale, sizeof scale_bits);
  fnv_mix(h, scale_bits);
  return h;
}

EncryptionParams EncryptionParams::create(std::size_t ring_degree,
                                          const std::vector<int>& prime_bits, int scale_bits) {
  if (ring_degree < 2 || !std::has_single_bit(ring_degree)) {
    throw ParameterError("ring_degree must be a power of two");
  }
  EncryptionParams p;
  p.ring_degree = ring_degree;
  for (int bits : prime_bits) {
    p.modulus_chain.push_back(ntt_primes_above(bits, ring_degree, 1, p.modulus_chain).front());
  }
  const u64 largest = p.modulus_chain.empty()
                          ? 0
                          : *std::max_element(p.modulus_chain.begin(), p.modulus_chain.end());
  const int special_bits = std::max(static_cast<int>(std::bit_width(largest)), 2);
  p.special_prime = ntt_primes_above(special_bits, ring_degree, 1, p.modulus_chain).front();
  p.scale = std::ldexp(1.0, scale_bits);
  p.validate();
  return p;
}

EncryptionParams EncryptionParams::defaults() { return create(4096, {60, 40, 40}, 40); }

}  // namespace qfl::fhe
