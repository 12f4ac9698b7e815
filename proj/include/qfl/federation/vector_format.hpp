// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "qfl/bytes.hpp"

namespace qfl::federation {

inline constexpr char kVectorMagic[4] = {'P', 'V', 'F', '1'};

/// "PVF1" | u64 count | count x f64, all little-endian.
void write_vector(std::span<const double> values, Bytes& out);
std::vector<double> read_vector(ByteReader& in);

Bytes serialize_vector(std::span<const double> values);
std::vector<double> deserialize_vector(std::span<const std::uint8_t> bytes);

}  // namespace qfl::federation
