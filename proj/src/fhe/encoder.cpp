// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/encoder.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::fhe {
namespace {

using Complex = std::complex<double>;

// Slot j is the evaluation at zeta^(5^j), zeta = exp(i*pi/N). The special FFT
// walks that rotation group instead of the usual powers of a root.
struct EmbeddingTables {
  std::size_t slots;
  std::size_t two_n;
  std::vector<std::size_t> rot_group;
  std::vector<Complex> ksi_pows;

  explicit EmbeddingTables(std::size_t n) : slots(n / 2), two_n(2 * n) {
    rot_group.resize(slots);
    std::size_t g = 1;
    for (std::size_t j = 0; j < slots; ++j) {
      rot_group[j] = g;
      g = (g * 5) % two_n;
    }
    ksi_pows.resize(two_n + 1);
    for (std::size_t j = 0; j <= two_n; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(two_n);
      ksi_pows[j] = {std::cos(angle), std::sin(angle)};
    }
  }

  static std::shared_ptr<const EmbeddingTables> get(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const EmbeddingTables>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const EmbeddingTables>(n);
    return slot;
  }
};

void bit_reverse_permute(std::vector<Complex>& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
}

// Slots -> evaluation points (decode direction).
void special_fft(std::vector<Complex>& vals, const EmbeddingTables& t) {
  const std::size_t size = vals.size();
  bit_reverse_permute(vals);
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (t.rot_group[j] % lenq) * (t.two_n / lenq);
        const Complex u = vals[i + j];
        const Complex v = vals[i + j + lenh] * t.ksi_pows[idx];
        vals[i + j] = u + v;
        vals[i + j + lenh] = u - v;
      }
    }
  }
}

// Inverse of special_fft (encode direction).
void special_fft_inverse(std::vector<Complex>& vals, const EmbeddingTables& t) {
  const std::size_t size = vals.size();
  for (std::size_t len = size; len >= 2; len >>= 1) {
    const std::size_t lenh = len >> 1;
    const std::size_t lenq = len << 2;
    for (std::size_t i = 0; i < size; i += len) {
      for (std::size_t j = 0; j < lenh; ++j) {
        const std::size_t idx = (lenq - (t.rot_group[j] % lenq)) * (t.two_n / lenq);
        const Complex u = vals[i + j] + vals[i + j + lenh];
        const Complex v = (vals[i + j] - vals[i + j + lenh]) * t.ksi_pows[idx];
        vals[i + j] = u;
        vals[i + j + lenh] = v;
      }
    }
  }
  bit_reverse_permute(vals);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& v : vals) v *= inv;
}

std::int64_t to_coefficient(double x) {
  const double r = std::round(x);
  if (!(std::fabs(r) < 0x1p62)) {
    throw DomainError("encode: scaled value overflows 62-bit coefficient range");
  }
  return static_cast<std::int64_t>(r);
}

}  // namespace

Plaintext encode(std::span<const double> values, const EncryptionParams& params, std::size_t level,
                 double scale) {
  const std::size_t slots = params.slot_count();
  if (values.size() > slots) {
    throw CapacityError("encode: " + std::to_string(values.size()) + " values exceed " +
                        std::to_string(slots) + " slots");
  }
  if (level > params.max_level()) throw LevelError("encode: level beyond modulus chain");
  if (!(scale > 0.0)) throw DomainError("encode: scale must be positive");
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("encode: non-finite input value");
  }
  const auto tables = EmbeddingTables::get(params.ring_degree);
  std::vector<Complex> vals(slots, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < values.size(); ++i) vals[i] = values[i];
  special_fft_inverse(vals, *tables);

  std::vector<std::int64_t> coeffs(params.ring_degree, 0);
  for (std::size_t i = 0; i < slots; ++i) {
    coeffs[i] = to_coefficient(vals[i].real() * scale);
    coeffs[i + slots] = to_coefficient(vals[i].imag() * scale);
  }
  std::vector<u64> moduli(params.modulus_chain.begin(),
                          params.modulus_chain.begin() + static_cast<std::ptrdiff_t>(level + 1));
  return Plaintext{RingPoly::from_signed(coeffs, std::move(moduli)), scale, level,
                   params.digest()};
}

Plaintext encode(std::span<const double> values, const EncryptionParams& params,
                 std::size_t level) {
  return encode(values, params, level, params.scale);
}

Plaintext encode_constant(double value, const EncryptionParams& params, std::size_t level) {
  std::vector<double> v(params.slot_count(), value);
  return encode(v, params, level);
}

std::vector<double> centered_coefficients(const RingPoly& poly) {
  if (poly.domain() != PolyDomain::kCoefficient) {
    throw DomainError("centered_coefficients: polynomial must be in coefficient form");
  }
  const auto& q = poly.moduli();
  const std::size_t k = q.size();
  // Balanced mixed-radix (Garner) digits d_i in (-q_i/2, q_i/2]; the value is
  // sum d_i * (q_0 ... q_{i-1}), which is exactly the centered representative.
  std::vector<std::vector<u64>> radix_mod(k);  // radix_mod[i][j] = (q_0..q_{j-1}) mod q_i
  std::vector<u64> radix_inv(k, 1);
  std::vector<long double> radix(k, 1.0L);
  for (std::size_t i = 0; i < k; ++i) {
    radix_mod[i].assign(i + 1, 1 % q[i]);
    for (std::size_t j = 1; j <= i; ++j) {
      radix_mod[i][j] = mul_mod(radix_mod[i][j - 1], q[j - 1] % q[i], q[i]);
    }
    if (i > 0) {
      radix_inv[i] = inv_mod(radix_mod[i][i], q[i]);
      radix[i] = radix[i - 1] * static_cast<long double>(q[i - 1]);
    }
  }
  std::vector<double> out(poly.degree());
  std::vector<std::int64_t> digits(k);
  for (std::size_t c = 0; c < poly.degree(); ++c) {
    long double value = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
      u64 acc = 0;
      for (std::size_t j = 0; j < i; ++j) {
        acc = add_mod(acc, mul_mod(reduce_signed(digits[j], q[i]), radix_mod[i][j], q[i]), q[i]);
      }
      const u64 t = mul_mod(sub_mod(poly.residues(i)[c], acc, q[i]), radix_inv[i], q[i]);
      digits[i] = center(t, q[i]);
      value += static_cast<long double>(digits[i]) * radix[i];
    }
    out[c] = static_cast<double>(value);
  }
  return out;
}

std::vector<double> decode(const Plaintext& pt, std::size_t count) {
  const std::size_t n = pt.poly.degree();
  const std::size_t slots = n / 2;
  if (count > slots) {
    throw CapacityError("decode: requested " + std::to_string(count) + " of " +
                        std::to_string(slots) + " slots");
  }
  if (count == 0) return {};
  const auto coeffs = centered_coefficients(pt.poly);
  std::vector<Complex> vals(slots);
  const double inv_scale = 1.0 / pt.scale;
  for (std::size_t i = 0; i < slots; ++i) {
    vals[i] = Complex{coeffs[i] * inv_scale, coeffs[i + slots] * inv_scale};
  }
  special_fft(vals, *EmbeddingTables::get(n));
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = vals[i].real();
  return out;
}

}  // namespace qfl::fhe
