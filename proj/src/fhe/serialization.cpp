// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/serialization.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::fhe {
namespace {

void write_poly(const RingPoly& p, ByteWriter& w) {
  w.le(static_cast<std::uint8_t>(p.domain()));
  w.le(static_cast<std::uint8_t>(p.prime_count()));
  for (u64 q : p.moduli()) w.le(q);
  for (u64 x : p.data()) w.le(x);
}

RingPoly read_poly(ByteReader& r, std::size_t degree) {
  const auto domain = r.le<std::uint8_t>();
  if (domain > 1) throw FormatError("unknown polynomial domain tag " + std::to_string(domain));
  const auto primes = r.le<std::uint8_t>();
  if (primes == 0) throw FormatError("polynomial with zero residue rows");
  std::vector<u64> moduli(primes);
  for (auto& q : moduli) {
    q = r.le<u64>();
    if (q < 2 || q >= (u64{1} << kMaxModulusBits)) throw FormatError("invalid modulus in record");
  }
  if (r.remaining() / 8 / primes < degree) throw FormatError("truncated polynomial residues");
  RingPoly p(degree, moduli, static_cast<PolyDomain>(domain));
  for (std::size_t k = 0; k < primes; ++k) {
    for (auto& x : p.residues(k)) {
      x = r.le<u64>();
      if (x >= moduli[k]) throw FormatError("residue out of range for its modulus");
    }
  }
  return p;
}

std::int16_t scale_exponent(double scale) {
  if (!(scale > 0.0)) return 0;
  return static_cast<std::int16_t>(std::lround(std::log2(scale)));
}

Record expect_record(ByteReader& in, ObjectKind kind, std::uint64_t digest) {
  Record rec = read_record(in);
  if (rec.kind != kind) {
    throw FormatError(std::string("expected ") + to_string(kind) + " record, found " +
                      to_string(rec.kind));
  }
  if (rec.params_digest != digest) {
    throw ParameterError("key record was generated under different parameters");
  }
  return rec;
}

}  // namespace

const char* to_string(ObjectKind kind) {
  switch (kind) {
    case ObjectKind::kCiphertext: return "ciphertext";
    case ObjectKind::kPublicKey: return "public-key";
    case ObjectKind::kGaloisKey: return "galois-key";
    case ObjectKind::kSecretKey: return "secret-key";
  }
  return "unknown";
}

void write_record(const Record& rec, Bytes& out) {
  ByteWriter w(out);
  w.raw(std::string_view(kRecordMagic, 4));
  w.le(rec.params_digest);
  w.le(rec.level);
  w.le(scale_exponent(rec.scale));
  w.le(static_cast<std::uint8_t>(rec.kind));
  w.f64(rec.scale);
  w.le(rec.ring_degree);
  w.le(rec.aux);
  w.le(static_cast<std::uint16_t>(rec.polys.size()));
  for (const auto& p : rec.polys) {
    if (p.degree() != rec.ring_degree) throw FormatError("polynomial degree differs from record");
    write_poly(p, w);
  }
}

Record read_record(ByteReader& in) {
  auto magic = in.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kRecordMagic)) {
    throw FormatError("bad magic bytes: not a CKV1 record");
  }
  Record rec;
  rec.params_digest = in.le<std::uint64_t>();
  rec.level = in.le<std::uint8_t>();
  const auto exp = in.le<std::int16_t>();
  const auto kind = in.le<std::uint8_t>();
  if (kind < 1 || kind > 4) throw FormatError("unknown object kind " + std::to_string(kind));
  rec.kind = static_cast<ObjectKind>(kind);
  rec.scale = in.f64();
  if (!std::isfinite(rec.scale) || rec.scale < 0.0 || exp != scale_exponent(rec.scale)) {
    throw FormatError("inconsistent scale fields");
  }
  rec.ring_degree = in.le<std::uint32_t>();
  if (rec.ring_degree < 2 || (rec.ring_degree & (rec.ring_degree - 1)) != 0 ||
      rec.ring_degree > (1u << 17)) {
    throw FormatError("invalid ring degree " + std::to_string(rec.ring_degree));
  }
  rec.aux = in.le<std::int32_t>();
  const auto count = in.le<std::uint16_t>();
  for (std::uint16_t i = 0; i < count; ++i) rec.polys.push_back(read_poly(in, rec.ring_degree));
  return rec;
}

void write_ciphertext(const Ciphertext& ct, Bytes& out) {
  Record rec;
  rec.kind = ObjectKind::kCiphertext;
  rec.params_digest = ct.params_digest;
  rec.level = static_cast<std::uint8_t>(ct.level);
  rec.scale = ct.scale;
  rec.ring_degree = static_cast<std::uint32_t>(ct.c0.degree());
  rec.polys = {ct.c0, ct.c1};
  write_record(rec, out);
}

Bytes serialize(const Ciphertext& ct) {
  Bytes out;
  write_ciphertext(ct, out);
  return out;
}

Ciphertext read_ciphertext(ByteReader& in) {
  Record rec = read_record(in);
  if (rec.kind != ObjectKind::kCiphertext) throw FormatError("record is not a ciphertext");
  if (rec.polys.size() != 2) throw FormatError("ciphertext must hold exactly two polynomials");
  auto& c0 = rec.polys[0];
  auto& c1 = rec.polys[1];
  if (c0.moduli() != c1.moduli() || c0.domain() != c1.domain() ||
      c0.prime_count() != static_cast<std::size_t>(rec.level) + 1 ||
      c0.domain() != PolyDomain::kCoefficient) {
    throw FormatError("ciphertext halves are inconsistent with the record level");
  }
  return Ciphertext{std::move(c0), std::move(c1), rec.scale, rec.level, rec.params_digest};
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  Ciphertext ct = read_ciphertext(in);
  if (!in.done()) throw FormatError("trailing bytes after ciphertext record");
  return ct;
}

Bytes serialize_public_key(const PublicKeyMaterial& pub) {
  Record rec;
  rec.kind = ObjectKind::kPublicKey;
  rec.params_digest = pub.params.digest();
  rec.level = static_cast<std::uint8_t>(pub.params.max_level());
  rec.scale = pub.params.scale;
  rec.ring_degree = static_cast<std::uint32_t>(pub.params.ring_degree);
  rec.polys = {pub.public_key.b, pub.public_key.a};
  Bytes out;
  write_record(rec, out);
  return out;
}

Bytes serialize_galois_keys(const PublicKeyMaterial& pub) {
  Bytes out;
  for (const auto& [step, key] : pub.galois_keys) {
    Record rec;
    rec.kind = ObjectKind::kGaloisKey;
    rec.params_digest = pub.params.digest();
    rec.level = static_cast<std::uint8_t>(pub.params.max_level());
    rec.scale = pub.params.scale;
    rec.ring_degree = static_cast<std::uint32_t>(pub.params.ring_degree);
    rec.aux = static_cast<std::int32_t>(step);
    for (std::size_t j = 0; j < key.b.size(); ++j) {
      rec.polys.push_back(key.b[j]);
      rec.polys.push_back(key.a[j]);
    }
    write_record(rec, out);
  }
  return out;
}

PublicKeyMaterial deserialize_public_material(const EncryptionParams& params,
                                              std::span<const std::uint8_t> public_key,
                                              std::span<const std::uint8_t> galois_keys) {
  params.validate();
  const auto digest = params.digest();
  PublicKeyMaterial pub;
  pub.params = params;
  {
    ByteReader in(public_key);
    Record rec = expect_record(in, ObjectKind::kPublicKey, digest);
    if (rec.polys.size() != 2) throw FormatError("public key must hold two polynomials");
    pub.public_key = PublicKey{std::move(rec.polys[0]), std::move(rec.polys[1])};
  }
  ByteReader in(galois_keys);
  while (!in.done()) {
    Record rec = expect_record(in, ObjectKind::kGaloisKey, digest);
    if (rec.aux < 1 || static_cast<std::size_t>(rec.aux) >= params.slot_count() ||
        rec.polys.size() != 2 * params.modulus_chain.size()) {
      throw FormatError("malformed Galois key record");
    }
    GaloisKey key;
    key.step = static_cast<std::size_t>(rec.aux);
    key.galois_elt = galois_element_for_step(key.step, params.ring_degree);
    for (std::size_t j = 0; j < rec.polys.size(); j += 2) {
      key.b.push_back(std::move(rec.polys[j]));
      key.a.push_back(std::move(rec.polys[j + 1]));
    }
    pub.galois_keys.emplace(key.step, std::move(key));
  }
  return pub;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for reading");
  Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

}  // namespace qfl::fhe
