// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/vector_format.hpp"

#include <algorithm>
#include <string>
#include <string_view>

#include "qfl/errors.hpp"

namespace qfl::federation {

void write_vector(std::span<const double> values, Bytes& out) {
  ByteWriter w(out);
  w.raw(std::string_view(kVectorMagic, 4));
  w.le<std::uint64_t>(values.size());
  for (double v : values) w.f64(v);
}

std::vector<double> read_vector(ByteReader& in) {
  const auto magic = in.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kVectorMagic)) {
    throw FormatError("vector: bad magic bytes");
  }
  const auto count = in.le<std::uint64_t>();
  if (count > in.remaining() / 8) {
    throw FormatError("vector: declared " + std::to_string(count) + " values but only " +
                      std::to_string(in.remaining()) + " bytes follow");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  for (auto& v : out) v = in.f64();
  return out;
}

Bytes serialize_vector(std::span<const double> values) {
  Bytes out;
  write_vector(values, out);
  return out;
}

std::vector<double> deserialize_vector(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  auto v = read_vector(in);
  if (!in.done()) throw FormatError("vector: trailing bytes");
  return v;
}

}  // namespace qfl::federation
