// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/client.hpp"

#include <algorithm>
#include <string>

#include "qfl/errors.hpp"
#include "qfl/fhe/decryptor.hpp"
#include "qfl/fhe/encoder.hpp"
#include "qfl/fhe/evaluator.hpp"
#include "qfl/federation/round_config.hpp"

namespace qfl::federation {

ClientUpdate encrypt_model(const model::HybridModel& model, const QuantizationSpec& spec,
                           const fhe::PublicKeyMaterial& keys, int client_id, int round_index,
                           std::size_t sample_count, std::uint64_t rng_seed) {
  const auto values = quantize(model::flatten_weights(model), spec);
  const auto& params = keys.params;
  const std::size_t slots = params.slot_count();
  ClientUpdate u;
  u.client_id = client_id;
  u.round_index = round_index;
  u.sample_count = sample_count;
  u.parameter_count = values.size();
  const std::size_t chunks = chunk_count(values.size(), slots);
  for (std::size_t i = 0; i < chunks; ++i) {
    const std::size_t begin = i * slots;
    const std::size_t end = std::min(values.size(), begin + slots);
    const std::span<const double> chunk(values.data() + begin, end - begin);
    const auto pt = fhe::encode(chunk, params, params.max_level());
    u.ciphertexts.push_back(fhe::encrypt(pt, keys, derive_seed(rng_seed, 0, static_cast<int>(i), 0)));
  }
  return u;
}

std::vector<double> decrypt_vector(std::span<const fhe::Ciphertext> chunks,
                                   const fhe::KeyMaterial& keys, std::size_t count) {
  const std::size_t slots = keys.params().slot_count();
  if (chunks.size() != chunk_count(count, slots)) {
    throw ShapeError("aggregate has " + std::to_string(chunks.size()) + " chunks, " +
                     std::to_string(count) + " values need " +
                     std::to_string(chunk_count(count, slots)));
  }
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto values = fhe::decode(fhe::decrypt(chunks[i], keys), std::min(slots, count - out.size()));
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

model::HybridModel decrypt_and_load(const EncryptedGlobal& global, const fhe::KeyMaterial& keys,
                                    const model::HybridModel& templ) {
  const std::size_t expected = templ.parameter_count();
  if (global.parameter_count != expected) {
    throw ShapeError("aggregate carries " + std::to_string(global.parameter_count) +
                     " parameters, model expects " + std::to_string(expected));
  }
  return model::unflatten_weights(templ, decrypt_vector(global.ciphertexts, keys, expected));
}

}  // namespace qfl::federation
