// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference implementations used only by tests. Each one is deliberately the
// slow textbook route so it shares no code path with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "qfl/fhe/ring_poly.hpp"

namespace qfl::testing {

/// O(N^2) multiplication modulo X^N + 1, row by row.
inline fhe::RingPoly schoolbook_negacyclic(const fhe::RingPoly& a, const fhe::RingPoly& b) {
  const std::size_t n = a.degree();
  fhe::RingPoly out(n, a.moduli());
  for (std::size_t k = 0; k < a.prime_count(); ++k) {
    const auto q = static_cast<unsigned __int128>(a.moduli()[k]);
    auto x = a.residues(k);
    auto y = b.residues(k);
    std::vector<unsigned __int128> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const auto prod = static_cast<unsigned __int128>(x[i]) * y[j] % q;
        if (i + j < n) {
          acc[i + j] = (acc[i + j] + prod) % q;
        } else {
          acc[i + j - n] = (acc[i + j - n] + q - prod) % q;
        }
      }
    }
    auto z = out.residues(k);
    for (std::size_t i = 0; i < n; ++i) z[i] = static_cast<std::uint64_t>(acc[i]);
  }
  return out;
}

/// Direct evaluation of a real-coefficient polynomial at zeta^(5^j),
/// zeta = exp(i*pi/N), for the first `count` slots.
inline std::vector<std::complex<double>> evaluate_at_slot_roots(const std::vector<double>& coeffs,
                                                                std::size_t count) {
  const std::size_t n = coeffs.size();
  const std::size_t two_n = 2 * n;
  std::vector<std::complex<double>> out(count);
  std::size_t g = 1;
  for (std::size_t j = 0; j < count; ++j) {
    std::complex<long double> acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t e = (i * g) % two_n;
      const long double angle = std::numbers::pi_v<long double> * static_cast<long double>(e) /
                                static_cast<long double>(n);
      acc += static_cast<long double>(coeffs[i]) *
             std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    out[j] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    g = (g * 5) % two_n;
  }
  return out;
}

}  // namespace qfl::testing
