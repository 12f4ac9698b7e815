// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qfl/errors.hpp"
#include "qfl/qsim/pqc.hpp"
#include "qfl/qsim/state_vector.hpp"

namespace qfl::qsim {
namespace {

using std::numbers::pi;
using State = StateVector<double>;

struct Instance {
  PqcArchitecture arch;
  PqcParams<double> params;
  std::vector<double> features;
  std::vector<double> weights;
};

Instance random_instance(std::mt19937_64& rng, int max_qubits, int max_depth) {
  std::uniform_int_distribution<int> nq(1, max_qubits), nd(1, max_depth), ax(0, 2);
  std::uniform_real_distribution<double> angle(-pi, pi), w(-1.0, 1.0);
  Instance in;
  in.arch.qubit_count = nq(rng);
  in.arch.depth = nd(rng);
  for (int l = 0; l < in.arch.depth; ++l) in.arch.layer_axes.push_back(static_cast<Axis>(ax(rng)));
  in.params.resize(in.arch.depth, in.arch.qubit_count);
  for (Eigen::Index i = 0; i < in.params.size(); ++i) in.params.data()[i] = angle(rng);
  for (int q = 0; q < in.arch.qubit_count; ++q) {
    in.features.push_back(angle(rng));
    in.weights.push_back(w(rng));
  }
  return in;
}

double objective(const Instance& in, const PqcParams<double>& params,
                 const std::vector<double>& features) {
  const auto r = run_pqc(std::span<const double>(features), in.arch, params);
  double acc = 0;
  for (std::size_t j = 0; j < r.size(); ++j) acc += in.weights[j] * r[j];
  return acc;
}

TEST(Embed, ZeroFeaturesGiveGroundState) {
  const std::vector<double> f(3, 0.0);
  const auto s = embed(std::span<const double>(f), 3);
  EXPECT_EQ(s.amplitudes()(0), std::complex<double>(1, 0));
  for (Eigen::Index i = 1; i < 8; ++i) EXPECT_EQ(s.amplitudes()(i), std::complex<double>(0, 0));
}

TEST(Embed, PiFlipsAndHalfPiBalances) {
  const std::vector<double> f{pi, pi / 2};
  const auto s = embed(std::span<const double>(f), 2);
  EXPECT_NEAR(expectation_z(s, 0), -1.0, 1e-15);
  EXPECT_NEAR(expectation_z(s, 1), 0.0, 1e-15);
  const std::vector<double> bad{0.1};
  EXPECT_THROW(embed(std::span<const double>(bad), 2), ShapeError);
}

TEST(Rotation, IdentityPeriodicityAndClosedForm) {
  const std::vector<double> f{0.4, -1.1};
  const auto s = embed(std::span<const double>(f), 2);
  EXPECT_TRUE(apply_rotation(s, 0, Axis::kY, 0.0).amplitudes().isApprox(s.amplitudes()));
  const auto full = apply_rotation(s, 1, Axis::kX, 2 * pi);
  EXPECT_LT((full.amplitudes() + s.amplitudes()).norm(), 1e-14);
  EXPECT_NEAR(expectation_z(full, 0), expectation_z(s, 0), 1e-14);

  const auto r = apply_rotation(State(1), 0, Axis::kX, 0.7);
  EXPECT_NEAR(expectation_z(r, 0), std::cos(0.7), 1e-15);
  EXPECT_THROW(apply_rotation(State(1), 1, Axis::kX, 0.1), ShapeError);
}

TEST(Cnot, TruthTableAndInvolution) {
  // |q0 q1>, q0 is the most significant bit.
  EXPECT_EQ(apply_cnot(State::basis(2, 0b00), 0, 1).amplitudes()(0b00), 1.0);
  EXPECT_EQ(apply_cnot(State::basis(2, 0b10), 0, 1).amplitudes()(0b11), 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> a(-pi, pi);
  const std::vector<double> f{a(rng), a(rng), a(rng)};
  const auto s = embed(std::span<const double>(f), 3);
  EXPECT_TRUE(apply_cnot(apply_cnot(s, 2, 0), 2, 0).amplitudes().isApprox(s.amplitudes()));
  EXPECT_THROW(apply_cnot(s, 1, 1), ShapeError);
}

TEST(RunPqc, ClosedFormsAndBounds) {
  PqcArchitecture arch{3, 2, {}, {}};
  PqcParams<double> zeros = PqcParams<double>::Zero(2, 3);
  const std::vector<double> f0(3, 0.0);
  for (double r : run_pqc(std::span<const double>(f0), arch, zeros)) EXPECT_EQ(r, 1.0);

  PqcArchitecture one{1, 1, {}, {}};
  PqcParams<double> theta(1, 1);
  theta << 0.9;
  const std::vector<double> f1{0.0};
  EXPECT_NEAR(run_pqc(std::span<const double>(f1), one, theta)[0], std::cos(0.9), 1e-15);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto in = random_instance(rng, 5, 3);
    for (double r : run_pqc(std::span<const double>(in.features), in.arch, in.params)) {
      EXPECT_LE(std::fabs(r), 1.0 + 1e-12);
    }
  }
  PqcParams<double> wrong(1, 2);
  EXPECT_THROW(run_pqc(std::span<const double>(f1), one, wrong), ShapeError);
}

TEST(RunPqc, NormIsPreserved) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto in = random_instance(rng, 6, 4);
    const auto s = pqc_state(std::span<const double>(in.features), in.arch, in.params);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
  }
}

TEST(RunPqc, LayerInverseRestoresState) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const auto in = random_instance(rng, 5, 1);
    const auto start = embed(std::span<const double>(in.features), in.arch.qubit_count);
    State s = start;
    const auto ring = in.arch.entangler();
    for (int q = 0; q < in.arch.qubit_count; ++q) apply_rotation_inplace(s, q, in.arch.axis(0), in.params(0, q));
    for (auto [c, t] : ring) apply_cnot_inplace(s, c, t);
    for (auto it = ring.rbegin(); it != ring.rend(); ++it) apply_cnot_inplace(s, it->first, it->second);
    for (int q = in.arch.qubit_count - 1; q >= 0; --q) {
      apply_rotation_inplace(s, q, in.arch.axis(0), -in.params(0, q));
    }
    EXPECT_LT((s.amplitudes() - start.amplitudes()).norm(), 1e-10);
  }
}

TEST(ParamShift, SingleQubitMatchesMinusSine) {
  PqcArchitecture one{1, 1, {}, {}};
  PqcParams<double> theta(1, 1);
  theta << 0.3;
  const std::vector<double> f{0.0}, w{1.0};
  const auto g = param_shift_grad(std::span<const double>(f), one, theta, std::span<const double>(w));
  EXPECT_NEAR(g(0, 0), -std::sin(0.3), 1e-15);

  theta << 0.0;
  const auto g0 = param_shift_grad(std::span<const double>(f), one, theta, std::span<const double>(w));
  EXPECT_NEAR(g0(0, 0), 0.0, 1e-15);
}

TEST(ParamShift, MatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const auto in = random_instance(rng, 4, 3);
    const std::span<const double> f(in.features);
    const std::span<const double> w(in.weights);
    const auto grad = param_shift_grad(f, in.arch, in.params, w);
    for (Eigen::Index k = 0; k < in.params.size(); ++k) {
      auto plus = in.params, minus = in.params;
      plus.data()[k] += h;
      minus.data()[k] -= h;
      const double fd = (objective(in, plus, in.features) - objective(in, minus, in.features)) / (2 * h);
      EXPECT_NEAR(grad.data()[k], fd, 1e-6);
    }
    const auto fgrad = param_shift_feature_grad(f, in.arch, in.params, w);
    for (std::size_t k = 0; k < in.features.size(); ++k) {
      auto plus = in.features, minus = in.features;
      plus[k] += h;
      minus[k] -= h;
      const double fd = (objective(in, in.params, plus) - objective(in, in.params, minus)) / (2 * h);
      EXPECT_NEAR(fgrad[k], fd, 1e-6);
    }
  }
}

TEST(ParamShift, ShapeErrors) {
  PqcArchitecture arch{2, 1, {}, {}};
  PqcParams<double> p = PqcParams<double>::Zero(1, 2);
  const std::vector<double> f{0.0, 0.0}, w{1.0};
  EXPECT_THROW(param_shift_grad(std::span<const double>(f), arch, p, std::span<const double>(w)),
               ShapeError);
}

TEST(Precision, SinglePrecisionAgreesWithDouble) {
  PqcArchitecture arch{3, 2, {Axis::kX, Axis::kY}, {}};
  PqcParams<float> pf(2, 3);
  pf << 0.1f, -0.4f, 1.2f, 0.7f, 2.0f, -2.5f;
  const PqcParams<double> pd = pf.cast<double>();
  const std::vector<float> ff{0.3f, -0.2f, 1.0f};
  const std::vector<double> fd{0.3f, -0.2f, 1.0f};
  const auto rf = run_pqc(std::span<const float>(ff), arch, pf);
  const auto rd = run_pqc(std::span<const double>(fd), arch, pd);
  for (std::size_t j = 0; j < rf.size(); ++j) EXPECT_NEAR(rf[j], rd[j], 1e-5);
}

}  // namespace
}  // namespace qfl::qsim
