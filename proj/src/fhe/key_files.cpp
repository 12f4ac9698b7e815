// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/key_files.hpp"

#include <system_error>

#include "qfl/errors.hpp"

namespace qfl::fhe {

Bytes serialize_secret_key(const KeyMaterial& keys) {
  Record rec;
  rec.kind = ObjectKind::kSecretKey;
  rec.params_digest = keys.params().digest();
  rec.level = static_cast<std::uint8_t>(keys.params().max_level());
  rec.scale = keys.params().scale;
  rec.ring_degree = static_cast<std::uint32_t>(keys.params().ring_degree);
  rec.polys = {keys.secret_key().s};
  Bytes out;
  write_record(rec, out);
  return out;
}

SecretKey deserialize_secret_key(const EncryptionParams& params,
                                 std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  Record rec = read_record(in);
  if (rec.kind != ObjectKind::kSecretKey) throw FormatError("record is not a secret key");
  if (rec.params_digest != params.digest()) {
    throw ParameterError("secret key was generated under different parameters");
  }
  if (rec.polys.size() != 1 || rec.polys[0].prime_count() != params.modulus_chain.size() + 1) {
    throw FormatError("malformed secret key record");
  }
  return SecretKey{std::move(rec.polys[0])};
}

void write_key_files(const KeyMaterial& keys, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create key directory " + dir.string() + ": " + ec.message());
  write_params_file(keys.params(), dir / kParamsFile);
  write_file(dir / kSecretKeyFile, serialize_secret_key(keys));
  write_file(dir / kPublicKeyFile, serialize_public_key(keys.public_material()));
  write_file(dir / kGaloisKeyFile, serialize_galois_keys(keys.public_material()));
}

PublicKeyMaterial load_public_material(const EncryptionParams& params,
                                       const std::filesystem::path& dir) {
  return deserialize_public_material(params, read_file(dir / kPublicKeyFile),
                                     read_file(dir / kGaloisKeyFile));
}

KeyMaterial load_key_material(const EncryptionParams& params, const std::filesystem::path& dir) {
  auto secret = deserialize_secret_key(params, read_file(dir / kSecretKeyFile));
  return KeyMaterial(std::move(secret), load_public_material(params, dir));
}

KeyMaterial load_key_material(const std::filesystem::path& dir) {
  return load_key_material(read_params_file(dir / kParamsFile), dir);
}

}  // namespace qfl::fhe
