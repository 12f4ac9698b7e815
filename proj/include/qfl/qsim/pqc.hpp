// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qfl/qsim/state_vector.hpp"

namespace qfl::qsim {

/// Layered variational circuit: angle embedding, then `depth` layers of one
/// rotation per qubit followed by a CNOT ring (i -> i+1 mod n). Two qubits get
/// a single CNOT, one qubit none.
struct PqcArchitecture {
  int qubit_count = 1;
  int depth = 1;
  std::vector<Axis> layer_axes;  // one per layer; empty means all RX
  std::vector<int> readout;      // qubits measured in Z; empty means all

  Axis axis(int layer) const {
    return layer_axes.empty() ? Axis::kX : layer_axes[static_cast<std::size_t>(layer)];
  }

  std::vector<int> readout_qubits() const {
    if (!readout.empty()) return readout;
    std::vector<int> all(static_cast<std::size_t>(qubit_count));
    for (int q = 0; q < qubit_count; ++q) all[static_cast<std::size_t>(q)] = q;
    return all;
  }

  std::vector<std::pair<int, int>> entangler() const {
    std::vector<std::pair<int, int>> pairs;
    if (qubit_count == 2) {
      pairs.emplace_back(0, 1);
    } else if (qubit_count > 2) {
      for (int q = 0; q < qubit_count; ++q) pairs.emplace_back(q, (q + 1) % qubit_count);
    }
    return pairs;
  }

  void validate() const {
    if (qubit_count < 1 || qubit_count > kMaxQubits) throw ShapeError("PQC qubit_count out of range");
    if (depth < 1) throw ShapeError("PQC depth must be >= 1");
    if (!layer_axes.empty() && layer_axes.size() != static_cast<std::size_t>(depth)) {
      throw ShapeError("PQC layer_axes must list one axis per layer");
    }
    for (int q : readout) {
      if (q < 0 || q >= qubit_count) throw ShapeError("PQC readout qubit out of range");
    }
  }
};

/// Rotation angles, depth x qubit_count, radians.
template <typename Real = double>
using PqcParams = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Real>
void check_shapes(std::span<const Real> features, const PqcArchitecture& arch,
                  const PqcParams<Real>& params) {
  arch.validate();
  if (features.size() != static_cast<std::size_t>(arch.qubit_count)) {
    throw ShapeError("PQC expects " + std::to_string(arch.qubit_count) + " features, got " +
                     std::to_string(features.size()));
  }
  if (params.rows() != arch.depth || params.cols() != arch.qubit_count) {
    throw ShapeError("PQC params must be depth x qubit_count");
  }
}

/// Final state after embedding and every variational layer.
template <typename Real>
StateVector<Real> pqc_state(std::span<const Real> features, const PqcArchitecture& arch,
                            const PqcParams<Real>& params) {
  check_shapes(features, arch, params);
  StateVector<Real> s = embed(features, arch.qubit_count);
  const auto ring = arch.entangler();
  for (int l = 0; l < arch.depth; ++l) {
    for (int q = 0; q < arch.qubit_count; ++q) apply_rotation_inplace(s, q, arch.axis(l), params(l, q));
    for (auto [c, t] : ring) apply_cnot_inplace(s, c, t);
  }
  return s;
}

/// Exact <Z> for each readout qubit.
template <typename Real>
std::vector<Real> run_pqc(std::span<const Real> features, const PqcArchitecture& arch,
                          const PqcParams<Real>& params) {
  const auto s = pqc_state(features, arch, params);
  std::vector<Real> out;
  for (int q : arch.readout_qubits()) out.push_back(expectation_z(s, q));
  return out;
}

namespace detail {

template <typename Real>
Real weighted_readout(std::span<const Real> features, const PqcArchitecture& arch,
                      const PqcParams<Real>& params, std::span<const Real> weights) {
  const auto r = run_pqc(features, arch, params);
  Real acc = 0;
  for (std::size_t j = 0; j < r.size(); ++j) acc += weights[j] * r[j];
  return acc;
}

template <typename Real>
void check_weights(const PqcArchitecture& arch, std::span<const Real> weights) {
  if (weights.size() != arch.readout_qubits().size()) {
    throw ShapeError("readout_weights must have one entry per readout qubit");
  }
}

}  // namespace detail

/// d(sum_j w_j <Z_j>) / d(angle) for every variational angle, by the
/// two-term shift rule with shift pi/2.
template <typename Real>
PqcParams<Real> param_shift_grad(std::span<const Real> features, const PqcArchitecture& arch,
                                 const PqcParams<Real>& params, std::span<const Real> weights) {
  check_shapes(features, arch, params);
  detail::check_weights(arch, weights);
  const Real shift = std::numbers::pi_v<Real> / 2;
  PqcParams<Real> grad(params.rows(), params.cols());
  PqcParams<Real> shifted = params;
  for (Eigen::Index l = 0; l < params.rows(); ++l) {
    for (Eigen::Index q = 0; q < params.cols(); ++q) {
      shifted(l, q) = params(l, q) + shift;
      const Real plus = detail::weighted_readout(features, arch, shifted, weights);
      shifted(l, q) = params(l, q) - shift;
      const Real minus = detail::weighted_readout(features, arch, shifted, weights);
      shifted(l, q) = params(l, q);
      grad(l, q) = (plus - minus) / 2;
    }
  }
  return grad;
}

/// Same rule applied to the embedding angles.
template <typename Real>
std::vector<Real> param_shift_feature_grad(std::span<const Real> features,
                                           const PqcArchitecture& arch,
                                           const PqcParams<Real>& params,
                                           std::span<const Real> weights) {
  check_shapes(features, arch, params);
  detail::check_weights(arch, weights);
  const Real shift = std::numbers::pi_v<Real> / 2;
  std::vector<Real> x(features.begin(), features.end());
  std::vector<Real> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = features[i] + shift;
    const Real plus = detail::weighted_readout(std::span<const Real>(x), arch, params, weights);
    x[i] = features[i] - shift;
    const Real minus = detail::weighted_readout(std::span<const Real>(x), arch, params, weights);
    x[i] = features[i];
    grad[i] = (plus - minus) / 2;
  }
  return grad;
}

}  // namespace qfl::qsim
