// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qfl/fhe/ring_poly.hpp"

namespace qfl::fhe::detail {

inline constexpr double kErrorSigma = 3.2;

using Rng = std::mt19937_64;

inline std::vector<std::int64_t> sample_ternary(std::size_t n, Rng& rng) {
  std::uniform_int_distribution<int> dist(-1, 1);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) x = dist(rng);
  return out;
}

// Rounded Gaussian, tail-cut at 6 sigma.
inline std::vector<std::int64_t> sample_gaussian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, kErrorSigma);
  std::vector<std::int64_t> out(n);
  for (auto& x : out) {
    double v;
    do {
      v = std::round(dist(rng));
    } while (std::fabs(v) > 6.0 * kErrorSigma);
    x = static_cast<std::int64_t>(v);
  }
  return out;
}

inline RingPoly sample_uniform(std::size_t n, const std::vector<u64>& moduli, Rng& rng,
                               PolyDomain domain) {
  RingPoly p(n, moduli, domain);
  for (std::size_t k = 0; k < moduli.size(); ++k) {
    std::uniform_int_distribution<u64> dist(0, moduli[k] - 1);
    for (auto& x : p.residues(k)) x = dist(rng);
  }
  return p;
}

}  // namespace qfl::fhe::detail
