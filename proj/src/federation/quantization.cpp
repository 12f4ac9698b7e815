// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::federation {

void QuantizationSpec::validate() const {
  if (fractional_bits < 1 || fractional_bits > 52) {
    throw ConfigError("quantization fractional_bits must lie in [1, 52], got " +
                      std::to_string(fractional_bits));
  }
  if (!(clip_range > 0.0) || !std::isfinite(clip_range)) {
    throw ConfigError("quantization clip_range must be positive and finite");
  }
}

double QuantizationSpec::step() const { return std::ldexp(1.0, -fractional_bits); }

double quantize(double value, const QuantizationSpec& spec) {
  if (!std::isfinite(value)) throw DomainError("quantize: non-finite value");
  const double clipped = std::clamp(value, -spec.clip_range, spec.clip_range);
  return std::ldexp(std::round(std::ldexp(clipped, spec.fractional_bits)), -spec.fractional_bits);
}

std::vector<double> quantize(std::span<const double> values, const QuantizationSpec& spec) {
  spec.validate();
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = quantize(values[i], spec);
  return out;
}

}  // namespace qfl::federation
