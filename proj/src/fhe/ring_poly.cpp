// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/ring_poly.hpp"

#include <string>

#include "qfl/errors.hpp"
#include "qfl/fhe/ntt.hpp"

namespace qfl::fhe {
namespace {

void check_compatible(const RingPoly& a, const RingPoly& b, const char* op) {
  if (a.degree() != b.degree() || a.moduli() != b.moduli()) {
    throw AlignmentError(std::string(op) + ": operands have different ring or prime set");
  }
  if (a.domain() != b.domain()) {
    throw DomainError(std::string(op) + ": operands are in different domains");
  }
}

}  // namespace

RingPoly::RingPoly(std::size_t degree, std::vector<u64> moduli, PolyDomain domain)
    : degree_(degree), moduli_(std::move(moduli)), domain_(domain),
      data_(degree_ * moduli_.size(), 0) {}

RingPoly RingPoly::from_signed(std::span<const std::int64_t> coeffs, std::vector<u64> moduli) {
  RingPoly p(coeffs.size(), std::move(moduli));
  for (std::size_t k = 0; k < p.prime_count(); ++k) {
    const u64 q = p.moduli_[k];
    auto row = p.residues(k);
    for (std::size_t i = 0; i < coeffs.size(); ++i) row[i] = reduce_signed(coeffs[i], q);
  }
  return p;
}

RingPoly RingPoly::select(std::span<const std::size_t> prime_indices) const {
  std::vector<u64> mods;
  for (auto idx : prime_indices) mods.push_back(moduli_.at(idx));
  RingPoly out(degree_, std::move(mods), domain_);
  for (std::size_t k = 0; k < prime_indices.size(); ++k) {
    auto src = residues(prime_indices[k]);
    std::copy(src.begin(), src.end(), out.residues(k).begin());
  }
  return out;
}

RingPoly RingPoly::prefix(std::size_t count) const {
  if (count > moduli_.size()) throw LevelError("prefix: not enough residue rows");
  RingPoly out(degree_, std::vector<u64>(moduli_.begin(), moduli_.begin() + count), domain_);
  std::copy(data_.begin(), data_.begin() + count * degree_, out.data_.begin());
  return out;
}

RingPoly operator+(const RingPoly& a, const RingPoly& b) {
  RingPoly out = a;
  out += b;
  return out;
}

RingPoly& operator+=(RingPoly& a, const RingPoly& b) {
  check_compatible(a, b, "add");
  for (std::size_t k = 0; k < a.prime_count(); ++k) {
    const u64 q = a.moduli()[k];
    auto x = a.residues(k);
    auto y = b.residues(k);
    for (std::size_t i = 0; i < a.degree(); ++i) x[i] = add_mod(x[i], y[i], q);
  }
  return a;
}

RingPoly operator-(const RingPoly& a, const RingPoly& b) {
  check_compatible(a, b, "sub");
  RingPoly out = a;
  for (std::size_t k = 0; k < a.prime_count(); ++k) {
    const u64 q = a.moduli()[k];
    auto x = out.residues(k);
    auto y = b.residues(k);
    for (std::size_t i = 0; i < a.degree(); ++i) x[i] = sub_mod(x[i], y[i], q);
  }
  return out;
}

RingPoly operator-(const RingPoly& a) {
  RingPoly out = a;
  for (std::size_t k = 0; k < a.prime_count(); ++k) {
    const u64 q = a.moduli()[k];
    for (auto& x : out.residues(k)) x = neg_mod(x, q);
  }
  return out;
}

RingPoly pointwise_mul(const RingPoly& a, const RingPoly& b) {
  check_compatible(a, b, "pointwise_mul");
  if (a.domain() != PolyDomain::kNtt) {
    throw DomainError("pointwise_mul: operands must be in NTT form");
  }
  RingPoly out = a;
  for (std::size_t k = 0; k < a.prime_count(); ++k) {
    const u64 q = a.moduli()[k];
    auto x = out.residues(k);
    auto y = b.residues(k);
    for (std::size_t i = 0; i < a.degree(); ++i) x[i] = mul_mod(x[i], y[i], q);
  }
  return out;
}

RingPoly ring_mul(const RingPoly& a, const RingPoly& b) {
  check_compatible(a, b, "ring_mul");
  if (a.domain() == PolyDomain::kNtt) return pointwise_mul(a, b);
  return ntt_inverse(pointwise_mul(ntt_forward(a), ntt_forward(b)));
}

RingPoly apply_galois(const RingPoly& p, std::size_t galois_elt) {
  if (p.domain() != PolyDomain::kCoefficient) {
    throw DomainError("apply_galois: polynomial must be in coefficient form");
  }
  if (galois_elt % 2 == 0) throw ParameterError("apply_galois: Galois element must be odd");
  const std::size_t n = p.degree();
  const std::size_t two_n = 2 * n;
  RingPoly out(n, p.moduli(), PolyDomain::kCoefficient);
  for (std::size_t k = 0; k < p.prime_count(); ++k) {
    const u64 q = p.moduli()[k];
    auto src = p.residues(k);
    auto dst = out.residues(k);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t e = (i * galois_elt) % two_n;
      if (e < n) {
        dst[e] = src[i];
      } else {
        dst[e - n] = neg_mod(src[i], q);
      }
    }
  }
  return out;
}

}  // namespace qfl::fhe
