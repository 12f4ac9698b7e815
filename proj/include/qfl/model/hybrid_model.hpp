// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "qfl/data/dataset.hpp"
#include "qfl/qsim/pqc.hpp"

namespace qfl::model {

/// Layer sizes and circuit layout; everything except the trainable values.
struct ModelShape {
  int feature_count = 2;
  int class_count = 2;
  qsim::PqcArchitecture pqc;

  int readout_count() const { return static_cast<int>(pqc.readout_qubits().size()); }
  void validate() const;
  bool operator==(const ModelShape& o) const {
    return feature_count == o.feature_count && class_count == o.class_count &&
           pqc.qubit_count == o.pqc.qubit_count && pqc.depth == o.pqc.depth &&
           pqc.layer_axes == o.pqc.layer_axes && pqc.readout == o.pqc.readout;
  }
};

/// features -> dense_in -> pi*tanh -> PQC (angle embedding + variational
/// layers, <Z> readout) -> dense_out -> logits.
struct HybridModel {
  ModelShape shape;
  Eigen::MatrixXd dense_in_weight;  // qubit_count x feature_count
  Eigen::VectorXd dense_in_bias;    // qubit_count
  qsim::PqcParams<double> angles;   // depth x qubit_count
  Eigen::MatrixXd dense_out_weight; // class_count x readout_count
  Eigen::VectorXd dense_out_bias;   // class_count

  std::size_t parameter_count() const;
  void validate() const;

  bool operator==(const HybridModel& o) const {
    return shape == o.shape && dense_in_weight == o.dense_in_weight &&
           dense_in_bias == o.dense_in_bias && angles == o.angles &&
           dense_out_weight == o.dense_out_weight && dense_out_bias == o.dense_out_bias;
  }
};

/// All-zero parameters of the right shapes.
HybridModel zero_model(const ModelShape& shape);

/// Dense weights uniform in [-0.5, 0.5], angles uniform in [-pi, pi].
HybridModel initialize_model(const ModelShape& shape, std::uint64_t seed);

/// Ordering: dense_in weight (row-major), dense_in bias, angles (layer-major),
/// dense_out weight (row-major), dense_out bias.
std::vector<double> flatten_weights(const HybridModel& model);
HybridModel unflatten_weights(const HybridModel& templ, std::span<const double> values);

struct ForwardCache {
  Eigen::MatrixXd inputs;          // B x features
  Eigen::MatrixXd pre_activation;  // B x qubits
  Eigen::MatrixXd embedding;       // B x qubits, pi*tanh(pre_activation)
  Eigen::MatrixXd readouts;        // B x readouts
};

struct ForwardResult {
  Eigen::MatrixXd logits;  // B x classes
  ForwardCache cache;
};

ForwardResult forward(const HybridModel& model, const Eigen::MatrixXd& batch);

/// Row-wise softmax.
Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits);

/// Mean softmax cross-entropy.
double cross_entropy(const Eigen::MatrixXd& logits, std::span<const int> labels);

/// Gradients share HybridModel's layout; `shape` is copied from the model.
using ModelGradients = HybridModel;

struct LossAndGrads {
  double loss = 0.0;
  ModelGradients grads;
};

/// Backprop through the dense layers, parameter shift through the circuit.
LossAndGrads loss_and_grads(const HybridModel& model, const Eigen::MatrixXd& batch,
                            std::span<const int> labels);

struct Evaluation {
  double accuracy = 0.0;
  double mean_loss = 0.0;
};

/// Argmax accuracy (ties go to the lowest class index) and mean loss.
Evaluation evaluate(const HybridModel& model, const data::Dataset& dataset);

/// Argmax per row; ties resolve to the lowest index.
std::vector<int> predict(const Eigen::MatrixXd& logits);

}  // namespace qfl::model
