// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "qfl/errors.hpp"
#include "qfl/fhe/modarith.hpp"
#include "qfl/fhe/ntt.hpp"
#include "support/oracles.hpp"

namespace qfl::fhe {
namespace {

RingPoly random_poly(std::size_t n, const std::vector<u64>& moduli, std::mt19937_64& rng) {
  RingPoly p(n, moduli);
  for (std::size_t k = 0; k < moduli.size(); ++k) {
    std::uniform_int_distribution<u64> d(0, moduli[k] - 1);
    for (auto& x : p.residues(k)) x = d(rng);
  }
  return p;
}

TEST(ModArith, PrimalityMatchesTrialDivision) {
  for (u64 n = 0; n < 5000; ++n) {
    bool trial = n >= 2;
    for (u64 d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        trial = false;
        break;
      }
    }
    EXPECT_EQ(is_prime(n), trial) << n;
  }
  EXPECT_TRUE(is_prime(2305843009213693951ULL));  // 2^61 - 1
  EXPECT_FALSE(is_prime(2305843009213693953ULL));
}

TEST(ModArith, ShoupAgreesWithWideMultiply) {
  std::mt19937_64 rng(7);
  const u64 q = ntt_primes_above(60, 4096, 1).front();
  std::uniform_int_distribution<u64> d(0, q - 1);
  for (int i = 0; i < 10000; ++i) {
    const u64 a = d(rng), w = d(rng);
    EXPECT_EQ(mul_mod_shoup(a, w, shoup_precompute(w, q), q), mul_mod(a, w, q));
  }
}

TEST(ModArith, NttPrimesAreCongruentToOne) {
  for (u64 q : ntt_primes_above(40, 4096, 4)) {
    EXPECT_TRUE(is_prime(q));
    EXPECT_EQ(q % 8192, 1u);
    EXPECT_GT(q, u64{1} << 40);
  }
}

TEST(Ntt, RoundTripIsExact) {
  std::mt19937_64 rng(1);
  const auto moduli = ntt_primes_above(50, 1024, 2);
  const RingPoly p = random_poly(1024, moduli, rng);
  const RingPoly f = ntt_forward(p);
  EXPECT_EQ(f.domain(), PolyDomain::kNtt);
  EXPECT_EQ(ntt_inverse(f), p);
}

TEST(Ntt, ZeroMapsToZero) {
  const auto moduli = ntt_primes_above(30, 16, 1);
  RingPoly zero(16, moduli);
  const RingPoly f = ntt_forward(zero);
  for (u64 x : f.data()) EXPECT_EQ(x, 0u);
}

TEST(Ntt, WrongDomainIsRejected) {
  const auto moduli = ntt_primes_above(30, 16, 1);
  RingPoly p(16, moduli);
  EXPECT_THROW(ntt_inverse(p), DomainError);
  EXPECT_THROW(ntt_forward(ntt_forward(p)), DomainError);
}

TEST(Ntt, ProductMatchesSchoolbookOnToyRings) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {8u, 16u}) {
    const auto moduli = ntt_primes_above(20, n, 2);
    for (int trial = 0; trial < 50; ++trial) {
      const RingPoly a = random_poly(n, moduli, rng);
      const RingPoly b = random_poly(n, moduli, rng);
      EXPECT_EQ(ring_mul(a, b), testing::schoolbook_negacyclic(a, b));
    }
  }
}

TEST(Ntt, ProductMatchesSchoolbookAtWordSize) {
  std::mt19937_64 rng(3);
  const auto moduli = ntt_primes_above(61, 64, 1);
  const RingPoly a = random_poly(64, moduli, rng);
  const RingPoly b = random_poly(64, moduli, rng);
  EXPECT_EQ(ring_mul(a, b), testing::schoolbook_negacyclic(a, b));
}

TEST(RingPoly, GaloisAutomorphismComposes) {
  std::mt19937_64 rng(4);
  const std::size_t n = 16;
  const auto moduli = ntt_primes_above(20, n, 1);
  const RingPoly p = random_poly(n, moduli, rng);
  // sigma_5 applied twice equals sigma_25.
  EXPECT_EQ(apply_galois(apply_galois(p, 5), 5), apply_galois(p, 25 % (2 * n)));
  EXPECT_THROW(apply_galois(p, 4), ParameterError);
}

TEST(RingPoly, MismatchedPrimeSetsAreRejected) {
  RingPoly a(8, ntt_primes_above(20, 8, 1));
  RingPoly b(8, ntt_primes_above(22, 8, 1));
  EXPECT_THROW(a + b, AlignmentError);
}

}  // namespace
}  // namespace qfl::fhe
