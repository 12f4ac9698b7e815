// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/keys.hpp"

#include <string>

#include "qfl/errors.hpp"
#include "qfl/fhe/decryptor.hpp"
#include "qfl/fhe/ntt.hpp"
#include "sampling.hpp"

namespace qfl::fhe {

KeyMaterial keygen(const EncryptionParams& params, const std::set<std::size_t>& rotation_steps,
                   std::uint64_t rng_seed) {
  params.validate();
  const std::size_t n = params.ring_degree;
  const std::size_t chain_len = params.modulus_chain.size();
  for (auto step : rotation_steps) {
    if (step < 1 || step >= params.slot_count()) {
      throw ParameterError("rotation step " + std::to_string(step) + " outside [1, slot_count)");
    }
  }

  std::vector<u64> ext_moduli = params.modulus_chain;
  ext_moduli.push_back(params.special_prime);

  detail::Rng rng(rng_seed);
  const auto s_coeffs = detail::sample_ternary(n, rng);
  SecretKey secret{RingPoly::from_signed(s_coeffs, ext_moduli)};
  const std::vector<std::size_t> chain_rows = [&] {
    std::vector<std::size_t> r(chain_len);
    for (std::size_t i = 0; i < chain_len; ++i) r[i] = i;
    return r;
  }();

  PublicKeyMaterial pub;
  pub.params = params;
  {
    const RingPoly s_ntt = ntt_forward(secret.s.select(chain_rows));
    RingPoly a = detail::sample_uniform(n, params.modulus_chain, rng, PolyDomain::kNtt);
    RingPoly e = ntt_forward(
        RingPoly::from_signed(detail::sample_gaussian(n, rng), params.modulus_chain));
    pub.public_key = PublicKey{e - pointwise_mul(a, s_ntt), std::move(a)};
  }

  const RingPoly s_ext_ntt = ntt_forward(secret.s);
  for (auto step : rotation_steps) {
    GaloisKey key;
    key.step = step;
    key.galois_elt = galois_element_for_step(step, n);
    // sigma(s) scaled by P, placed on a single chain row per digit.
    const RingPoly s_rot = apply_galois(secret.s, key.galois_elt);
    const u64 special = params.special_prime;
    for (std::size_t j = 0; j < chain_len; ++j) {
      RingPoly a = detail::sample_uniform(n, ext_moduli, rng, PolyDomain::kNtt);
      RingPoly e =
          ntt_forward(RingPoly::from_signed(detail::sample_gaussian(n, rng), ext_moduli));
      RingPoly b = e - pointwise_mul(a, s_ext_ntt);
      RingPoly lifted(n, ext_moduli);
      {
        const u64 q = ext_moduli[j];
        const u64 p_mod_q = special % q;
        auto src = s_rot.residues(j);
        auto dst = lifted.residues(j);
        for (std::size_t i = 0; i < n; ++i) dst[i] = mul_mod(src[i], p_mod_q, q);
      }
      b += ntt_forward(lifted);
      key.b.push_back(std::move(b));
      key.a.push_back(std::move(a));
    }
    pub.galois_keys.emplace(step, std::move(key));
  }
  return KeyMaterial(std::move(secret), std::move(pub));
}

Plaintext decrypt(const Ciphertext& ct, const SecretKey& secret, const EncryptionParams& params) {
  if (ct.params_digest != params.digest()) {
    throw ParameterError("decrypt: ciphertext was made under different parameters");
  }
  if (ct.level > params.max_level() || ct.c0.prime_count() != ct.level + 1 ||
      ct.c1.moduli() != ct.c0.moduli()) {
    throw ParameterError("decrypt: malformed ciphertext");
  }
  if (secret.s.prime_count() < ct.level + 1) throw KeyError("decrypt: secret key missing");
  const RingPoly s = ntt_forward(secret.s.prefix(ct.level + 1));
  RingPoly m = ct.c0 + ntt_inverse(pointwise_mul(ntt_forward(ct.c1), s));
  return Plaintext{std::move(m), ct.scale, ct.level, ct.params_digest};
}

Plaintext decrypt(const Ciphertext& ct, const KeyMaterial& keys) {
  return decrypt(ct, keys.secret_key(), keys.params());
}

}  // namespace qfl::fhe
