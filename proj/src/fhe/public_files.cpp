// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/fhe/public_files.hpp"

#include <json.hpp>

#include "qfl/errors.hpp"
#include "qfl/fhe/serialization.hpp"

namespace qfl::fhe {

std::string params_to_json(const EncryptionParams& p) {
  nlohmann::ordered_json j;
  j["ring_degree"] = p.ring_degree;
  j["modulus_chain"] = p.modulus_chain;
  j["special_prime"] = p.special_prime;
  j["scale"] = p.scale;
  j["digest"] = p.digest();
  return j.dump(2) + "\n";
}

EncryptionParams params_from_json(const std::string& text) {
  EncryptionParams p;
  std::uint64_t digest = 0;
  try {
    const auto j = nlohmann::json::parse(text);
    p.ring_degree = j.at("ring_degree").get<std::size_t>();
    p.modulus_chain = j.at("modulus_chain").get<std::vector<u64>>();
    p.special_prime = j.at("special_prime").get<u64>();
    p.scale = j.at("scale").get<double>();
    digest = j.at("digest").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("params file: ") + e.what());
  }
  try {
    p.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("params file: ") + e.what());
  }
  if (p.digest() != digest) throw FormatError("params file: digest does not match the fields");
  return p;
}

void write_params_file(const EncryptionParams& params, const std::filesystem::path& path) {
  const auto text = params_to_json(params);
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

EncryptionParams read_params_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return params_from_json(std::string(bytes.begin(), bytes.end()));
}

PublicKeyMaterial load_public_material(const std::filesystem::path& dir) {
  const auto params = read_params_file(dir / kParamsFile);
  return deserialize_public_material(params, read_file(dir / kPublicKeyFile),
                                     read_file(dir / kGaloisKeyFile));
}

}  // namespace qfl::fhe
