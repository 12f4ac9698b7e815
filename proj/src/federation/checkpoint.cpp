// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/checkpoint.hpp"

#include <algorithm>
#include <string>
#include <string_view>

#include "qfl/errors.hpp"
#include "qfl/federation/vector_format.hpp"
#include "qfl/fhe/serialization.hpp"

namespace qfl::federation {

// features u32 | classes u32 | qubits u32 | depth u32 |
// axis count u32 + u8 each | readout count u32 + u32 each | PVF1
Bytes serialize_checkpoint(const model::HybridModel& m) {
  m.validate();
  Bytes out;
  ByteWriter w(out);
  w.raw(std::string_view(kCheckpointMagic, 4));
  const auto& s = m.shape;
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.feature_count));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.class_count));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.pqc.qubit_count));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.pqc.depth));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.pqc.layer_axes.size()));
  for (auto a : s.pqc.layer_axes) w.le<std::uint8_t>(static_cast<std::uint8_t>(a));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(s.pqc.readout.size()));
  for (int q : s.pqc.readout) w.le<std::uint32_t>(static_cast<std::uint32_t>(q));
  write_vector(model::flatten_weights(m), out);
  return out;
}

model::HybridModel deserialize_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  const auto magic = in.raw(4);
  if (!std::equal(magic.begin(), magic.end(), kCheckpointMagic)) {
    throw FormatError("checkpoint: bad magic bytes");
  }
  auto small = [&](const char* what) {
    const auto v = in.le<std::uint32_t>();
    if (v > 1u << 16) throw FormatError(std::string("checkpoint: implausible ") + what);
    return static_cast<int>(v);
  };
  model::ModelShape s;
  s.feature_count = small("feature count");
  s.class_count = small("class count");
  s.pqc.qubit_count = small("qubit count");
  s.pqc.depth = small("depth");
  const int axes = small("axis count");
  for (int i = 0; i < axes; ++i) {
    const auto a = in.le<std::uint8_t>();
    if (a > 2) throw FormatError("checkpoint: unknown rotation axis");
    s.pqc.layer_axes.push_back(static_cast<qsim::Axis>(a));
  }
  const int readouts = small("readout count");
  for (int i = 0; i < readouts; ++i) s.pqc.readout.push_back(small("readout qubit"));
  const auto values = read_vector(in);
  if (!in.done()) throw FormatError("checkpoint: trailing bytes");
  try {
    auto m = model::unflatten_weights(model::zero_model(s), values);
    m.validate();
    return m;
  } catch (const ShapeError& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const model::HybridModel& model, const std::filesystem::path& path) {
  fhe::write_file(path, serialize_checkpoint(model));
}

model::HybridModel load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(fhe::read_file(path));
}

}  // namespace qfl::federation
