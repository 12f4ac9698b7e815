// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/evaluator.hpp"

#include <cmath>
#include <string>

#include "qfl/errors.hpp"
#include "qfl/fhe/ntt.hpp"
#include "sampling.hpp"

namespace qfl::fhe {
namespace {

void check_digest(const Ciphertext& ct, const EncryptionParams& params, const char* op) {
  if (ct.params_digest != params.digest()) {
    throw ParameterError(std::string(op) + ": ciphertext was made under different parameters");
  }
}

// Exact division by the last prime with rounding: x_i <- (x_i - [x_last]) / q_last.
RingPoly divide_and_round_by_last(const RingPoly& p) {
  const std::size_t last = p.prime_count() - 1;
  const u64 q_last = p.moduli()[last];
  RingPoly out = p.prefix(last);
  auto top = p.residues(last);
  for (std::size_t k = 0; k < last; ++k) {
    const u64 q = out.moduli()[k];
    const u64 inv = inv_mod(q_last % q, q);
    const u64 inv_shoup = shoup_precompute(inv, q);
    auto row = out.residues(k);
    for (std::size_t i = 0; i < row.size(); ++i) {
      const u64 t = reduce_signed(center(top[i], q_last), q);
      row[i] = mul_mod_shoup(sub_mod(row[i], t, q), inv, inv_shoup, q);
    }
  }
  return out;
}

// Rows 0..level of the chain plus the special prime (last row of key polys).
std::vector<std::size_t> key_rows(std::size_t level, std::size_t chain_len) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i <= level; ++i) rows.push_back(i);
  rows.push_back(chain_len);
  return rows;
}

}  // namespace

std::size_t galois_element_for_step(std::size_t step, std::size_t ring_degree) {
  return static_cast<std::size_t>(pow_mod(5, step, 2 * ring_degree));
}

Ciphertext encrypt(const Plaintext& pt, const PublicKeyMaterial& keys, std::uint64_t rng_seed) {
  const auto& params = keys.params;
  if (pt.params_digest != params.digest()) {
    throw ParameterError("encrypt: plaintext was encoded under different parameters");
  }
  if (pt.level > params.max_level()) throw LevelError("encrypt: level beyond modulus chain");
  if (keys.public_key.b.prime_count() == 0) throw KeyError("encrypt: public key missing");

  const std::size_t n = params.ring_degree;
  const std::size_t rows = pt.level + 1;
  const auto& moduli = pt.poly.moduli();

  detail::Rng rng(rng_seed);
  const auto u_coeffs = detail::sample_ternary(n, rng);
  const auto e0 = detail::sample_gaussian(n, rng);
  const auto e1 = detail::sample_gaussian(n, rng);

  RingPoly u = ntt_forward(RingPoly::from_signed(u_coeffs, moduli));
  RingPoly c0 = ntt_inverse(pointwise_mul(keys.public_key.b.prefix(rows), u));
  RingPoly c1 = ntt_inverse(pointwise_mul(keys.public_key.a.prefix(rows), u));
  c0 += RingPoly::from_signed(e0, moduli);
  c0 += pt.poly;
  c1 += RingPoly::from_signed(e1, moduli);
  return Ciphertext{std::move(c0), std::move(c1), pt.scale, pt.level, pt.params_digest};
}

Ciphertext add_ct(const Ciphertext& a, const Ciphertext& b) {
  if (a.params_digest != b.params_digest) {
    throw AlignmentError("add_ct: operands use different parameters");
  }
  if (a.level != b.level) {
    throw AlignmentError("add_ct: level mismatch (" + std::to_string(a.level) + " vs " +
                         std::to_string(b.level) + ")");
  }
  if (std::fabs(a.scale - b.scale) > std::ldexp(a.scale, -30)) {
    throw AlignmentError("add_ct: scale mismatch");
  }
  return Ciphertext{a.c0 + b.c0, a.c1 + b.c1, a.scale, a.level, a.params_digest};
}

Ciphertext mul_plain(const Ciphertext& ct, const Plaintext& pt) {
  if (ct.params_digest != pt.params_digest) {
    throw AlignmentError("mul_plain: operands use different parameters");
  }
  if (ct.level != pt.level) {
    throw AlignmentError("mul_plain: level mismatch (" + std::to_string(ct.level) + " vs " +
                         std::to_string(pt.level) + ")");
  }
  const RingPoly p = ntt_forward(pt.poly);
  RingPoly c0 = ntt_inverse(pointwise_mul(ntt_forward(ct.c0), p));
  RingPoly c1 = ntt_inverse(pointwise_mul(ntt_forward(ct.c1), p));
  return Ciphertext{std::move(c0), std::move(c1), ct.scale * pt.scale, ct.level,
                    ct.params_digest};
}

Ciphertext rescale(const Ciphertext& ct) {
  if (ct.level == 0) throw LevelError("rescale: modulus chain exhausted at level 0");
  const u64 dropped = ct.c0.moduli().back();
  return Ciphertext{divide_and_round_by_last(ct.c0), divide_and_round_by_last(ct.c1),
                    ct.scale / static_cast<double>(dropped), ct.level - 1, ct.params_digest};
}

Ciphertext rotate(const Ciphertext& ct, long step, const PublicKeyMaterial& keys) {
  check_digest(ct, keys.params, "rotate");
  const auto slots = static_cast<long>(keys.params.slot_count());
  const auto normalized = static_cast<std::size_t>(((step % slots) + slots) % slots);
  if (normalized == 0) return ct;
  const auto it = keys.galois_keys.find(normalized);
  if (it == keys.galois_keys.end()) {
    throw KeyError("rotate: no Galois key for step " + std::to_string(normalized));
  }
  const GaloisKey& key = it->second;
  const std::size_t n = keys.params.ring_degree;
  const std::size_t chain_len = keys.params.modulus_chain.size();
  const auto rows = key_rows(ct.level, chain_len);

  const RingPoly c0 = apply_galois(ct.c0, key.galois_elt);
  const RingPoly c1 = apply_galois(ct.c1, key.galois_elt);

  // Hybrid key switching: decompose c1 by RNS digit, lift each digit to the
  // extended basis {q_0..q_level, P}, multiply by the key, then divide by P.
  std::vector<u64> ext_moduli(c1.moduli());
  ext_moduli.push_back(keys.params.special_prime);
  RingPoly acc_b(n, ext_moduli, PolyDomain::kNtt);
  RingPoly acc_a(n, ext_moduli, PolyDomain::kNtt);
  for (std::size_t j = 0; j <= ct.level; ++j) {
    RingPoly digit(n, ext_moduli);
    auto src = c1.residues(j);
    for (std::size_t k = 0; k < ext_moduli.size(); ++k) {
      auto dst = digit.residues(k);
      for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] % ext_moduli[k];
    }
    ntt_forward_inplace(digit);
    acc_b += pointwise_mul(digit, key.b[j].select(rows));
    acc_a += pointwise_mul(digit, key.a[j].select(rows));
  }
  ntt_inverse_inplace(acc_b);
  ntt_inverse_inplace(acc_a);
  RingPoly new_c0 = c0 + divide_and_round_by_last(acc_b);
  RingPoly new_c1 = divide_and_round_by_last(acc_a);
  return Ciphertext{std::move(new_c0), std::move(new_c1), ct.scale, ct.level, ct.params_digest};
}

}  // namespace qfl::fhe
