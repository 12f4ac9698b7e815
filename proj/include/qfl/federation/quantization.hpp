// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

namespace qfl::federation {

/// Fixed-point grid applied to weights before encryption.
struct QuantizationSpec {
  int fractional_bits = 16;
  double clip_range = 8.0;  // symmetric bound B

  void validate() const;
  double step() const;
};

/// Clip to [-B, B], then round to the nearest multiple of 2^-f (halves away from zero).
std::vector<double> quantize(std::span<const double> values, const QuantizationSpec& spec);
double quantize(double value, const QuantizationSpec& spec);

}  // namespace qfl::federation
