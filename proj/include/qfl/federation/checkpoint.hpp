// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>

#include "qfl/bytes.hpp"
#include "qfl/model/hybrid_model.hpp"

namespace qfl::federation {

inline constexpr char kCheckpointMagic[4] = {'Q', 'C', 'K', '1'};

/// "QCK1" | architecture header | PVF1 block of flatten_weights.
Bytes serialize_checkpoint(const model::HybridModel& model);
model::HybridModel deserialize_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const model::HybridModel& model, const std::filesystem::path& path);
model::HybridModel load_checkpoint(const std::filesystem::path& path);

}  // namespace qfl::federation
