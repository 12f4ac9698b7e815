// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::qsim {

inline constexpr int kMaxQubits = 12;

enum class Axis { kX, kY, kZ };

/// Dense n-qubit state. Qubit 0 is the most significant bit of the basis
/// index, so |q0 q1 ... q_{n-1}> reads left to right.
template <typename Real = double>
class StateVector {
 public:
  using Scalar = std::complex<Real>;
  using Amplitudes = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit StateVector(int qubit_count) : qubits_(checked(qubit_count)) {
    amps_ = Amplitudes::Zero(Eigen::Index{1} << qubits_);
    amps_(0) = Scalar(1);
  }

  static StateVector basis(int qubit_count, std::size_t index) {
    StateVector s(qubit_count);
    if (index >= s.dimension()) throw ShapeError("basis index out of range");
    s.amps_(0) = Scalar(0);
    s.amps_(static_cast<Eigen::Index>(index)) = Scalar(1);
    return s;
  }

  int qubit_count() const { return qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
  const Amplitudes& amplitudes() const { return amps_; }
  Amplitudes& amplitudes() { return amps_; }
  Real norm_squared() const { return amps_.squaredNorm(); }

  /// Bit mask selecting `qubit` inside a basis index.
  std::size_t mask(int qubit) const {
    check_qubit(qubit);
    return std::size_t{1} << (qubits_ - 1 - qubit);
  }

  void check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= qubits_) {
      throw ShapeError("qubit index " + std::to_string(qubit) + " out of range for " +
                       std::to_string(qubits_) + " qubits");
    }
  }

 private:
  static int checked(int n) {
    if (n < 1 || n > kMaxQubits) {
      throw ShapeError("qubit count must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
    return n;
  }

  int qubits_;
  Amplitudes amps_;
};

/// exp(-i angle/2 sigma_axis) as a 2x2 matrix.
template <typename Real>
Eigen::Matrix<std::complex<Real>, 2, 2> rotation_matrix(Axis axis, Real angle) {
  using C = std::complex<Real>;
  const Real c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::Matrix<C, 2, 2> m;
  switch (axis) {
    case Axis::kX: m << C(c, 0), C(0, -s), C(0, -s), C(c, 0); break;
    case Axis::kY: m << C(c, 0), C(-s, 0), C(s, 0), C(c, 0); break;
    case Axis::kZ: m << C(c, -s), C(0, 0), C(0, 0), C(c, s); break;
  }
  return m;
}

template <typename Real>
void apply_single_qubit_inplace(StateVector<Real>& state, int qubit,
                                const Eigen::Matrix<std::complex<Real>, 2, 2>& u) {
  const std::size_t bit = state.mask(qubit);
  auto& a = state.amplitudes();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if (i & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | bit);
    const auto x = a(i0), y = a(i1);
    a(i0) = u(0, 0) * x + u(0, 1) * y;
    a(i1) = u(1, 0) * x + u(1, 1) * y;
  }
}

template <typename Real>
void apply_rotation_inplace(StateVector<Real>& state, int qubit, Axis axis, Real angle) {
  apply_single_qubit_inplace(state, qubit, rotation_matrix(axis, angle));
}

template <typename Real>
void apply_cnot_inplace(StateVector<Real>& state, int control, int target) {
  if (control == target) throw ShapeError("CNOT control and target must differ");
  const std::size_t cbit = state.mask(control), tbit = state.mask(target);
  auto& a = state.amplitudes();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    if ((i & cbit) && !(i & tbit)) {
      std::swap(a(static_cast<Eigen::Index>(i)), a(static_cast<Eigen::Index>(i | tbit)));
    }
  }
}

template <typename Real>
StateVector<Real> apply_rotation(StateVector<Real> state, int qubit, Axis axis, Real angle) {
  apply_rotation_inplace(state, qubit, axis, angle);
  return state;
}

template <typename Real>
StateVector<Real> apply_cnot(StateVector<Real> state, int control, int target) {
  apply_cnot_inplace(state, control, target);
  return state;
}

/// <Z> on one qubit.
template <typename Real>
Real expectation_z(const StateVector<Real>& state, int qubit) {
  const std::size_t bit = state.mask(qubit);
  Real acc = 0;
  const auto& a = state.amplitudes();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const Real p = std::norm(a(static_cast<Eigen::Index>(i)));
    acc += (i & bit) ? -p : p;
  }
  return acc;
}

/// Product state  RX(f_0)|0> ⊗ ... ⊗ RX(f_{n-1})|0>.
template <typename Real>
StateVector<Real> embed(std::span<const Real> features, int qubit_count) {
  if (features.size() != static_cast<std::size_t>(qubit_count)) {
    throw ShapeError("embed: " + std::to_string(features.size()) + " features for " +
                     std::to_string(qubit_count) + " qubits");
  }
  StateVector<Real> s(qubit_count);
  for (int q = 0; q < qubit_count; ++q) {
    apply_rotation_inplace(s, q, Axis::kX, features[static_cast<std::size_t>(q)]);
  }
  return s;
}

}  // namespace qfl::qsim
