// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qfl/data/dataset.hpp"
#include "qfl/fhe/keys.hpp"
#include "qfl/federation/quantization.hpp"
#include "qfl/federation/updates.hpp"
#include "qfl/model/hybrid_model.hpp"

namespace qfl::federation {

/// flatten -> quantize -> one ciphertext per slot-sized chunk.
ClientUpdate encrypt_model(const model::HybridModel& model, const QuantizationSpec& spec,
                           const fhe::PublicKeyMaterial& keys, int client_id, int round_index,
                           std::size_t sample_count, std::uint64_t rng_seed);

/// Decrypts every chunk and concatenates, truncated to `count` values.
std::vector<double> decrypt_vector(std::span<const fhe::Ciphertext> chunks,
                                   const fhe::KeyMaterial& keys, std::size_t count);

/// Throws ShapeError when the aggregate does not carry template's parameter count.
model::HybridModel decrypt_and_load(const EncryptedGlobal& global, const fhe::KeyMaterial& keys,
                                    const model::HybridModel& templ);

/// Applied to the global model after every round; the default leaves it untouched.
using PqcHook = std::function<void(model::HybridModel& global, int round_index)>;

}  // namespace qfl::federation
