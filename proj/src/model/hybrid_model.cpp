// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/model/hybrid_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::model {
namespace {

constexpr double kPi = std::numbers::pi;

template <typename Fn>
void for_each_block(const HybridModel& m, Fn&& fn) {
  fn(m.dense_in_weight.data(), m.dense_in_weight.size(), m.dense_in_weight.rows(),
     m.dense_in_weight.cols());
  fn(m.dense_in_bias.data(), m.dense_in_bias.size(), m.dense_in_bias.size(), 1);
  fn(m.angles.data(), m.angles.size(), m.angles.rows(), m.angles.cols());
  fn(m.dense_out_weight.data(), m.dense_out_weight.size(), m.dense_out_weight.rows(),
     m.dense_out_weight.cols());
  fn(m.dense_out_bias.data(), m.dense_out_bias.size(), m.dense_out_bias.size(), 1);
}

}  // namespace

void ModelShape::validate() const {
  if (feature_count < 1) throw ShapeError("model needs at least one input feature");
  if (class_count < 2) throw ShapeError("model needs at least two classes");
  pqc.validate();
}

std::size_t HybridModel::parameter_count() const {
  std::size_t n = 0;
  for_each_block(*this, [&](const double*, Eigen::Index size, Eigen::Index, Eigen::Index) {
    n += static_cast<std::size_t>(size);
  });
  return n;
}

void HybridModel::validate() const {
  shape.validate();
  const int q = shape.pqc.qubit_count;
  if (dense_in_weight.rows() != q || dense_in_weight.cols() != shape.feature_count ||
      dense_in_bias.size() != q || angles.rows() != shape.pqc.depth || angles.cols() != q ||
      dense_out_weight.rows() != shape.class_count ||
      dense_out_weight.cols() != shape.readout_count() ||
      dense_out_bias.size() != shape.class_count) {
    throw ShapeError("model layer shapes do not chain");
  }
  if (!dense_in_weight.allFinite() || !dense_in_bias.allFinite() || !angles.allFinite() ||
      !dense_out_weight.allFinite() || !dense_out_bias.allFinite()) {
    throw DomainError("model has non-finite parameters");
  }
}

HybridModel zero_model(const ModelShape& shape) {
  shape.validate();
  const int q = shape.pqc.qubit_count;
  HybridModel m;
  m.shape = shape;
  m.dense_in_weight = Eigen::MatrixXd::Zero(q, shape.feature_count);
  m.dense_in_bias = Eigen::VectorXd::Zero(q);
  m.angles = qsim::PqcParams<double>::Zero(shape.pqc.depth, q);
  m.dense_out_weight = Eigen::MatrixXd::Zero(shape.class_count, shape.readout_count());
  m.dense_out_bias = Eigen::VectorXd::Zero(shape.class_count);
  return m;
}

HybridModel initialize_model(const ModelShape& shape, std::uint64_t seed) {
  HybridModel m = zero_model(shape);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dense(-0.5, 0.5), angle(-kPi, kPi);
  auto fill = [&](double* p, Eigen::Index n, auto& dist) {
    for (Eigen::Index i = 0; i < n; ++i) p[i] = dist(rng);
  };
  fill(m.dense_in_weight.data(), m.dense_in_weight.size(), dense);
  fill(m.dense_in_bias.data(), m.dense_in_bias.size(), dense);
  fill(m.angles.data(), m.angles.size(), angle);
  fill(m.dense_out_weight.data(), m.dense_out_weight.size(), dense);
  fill(m.dense_out_bias.data(), m.dense_out_bias.size(), dense);
  return m;
}

std::vector<double> flatten_weights(const HybridModel& model) {
  std::vector<double> out;
  out.reserve(model.parameter_count());
  // Row-major within each block regardless of Eigen storage order.
  for (Eigen::Index r = 0; r < model.dense_in_weight.rows(); ++r)
    for (Eigen::Index c = 0; c < model.dense_in_weight.cols(); ++c) out.push_back(model.dense_in_weight(r, c));
  for (Eigen::Index i = 0; i < model.dense_in_bias.size(); ++i) out.push_back(model.dense_in_bias(i));
  for (Eigen::Index l = 0; l < model.angles.rows(); ++l)
    for (Eigen::Index q = 0; q < model.angles.cols(); ++q) out.push_back(model.angles(l, q));
  for (Eigen::Index r = 0; r < model.dense_out_weight.rows(); ++r)
    for (Eigen::Index c = 0; c < model.dense_out_weight.cols(); ++c) out.push_back(model.dense_out_weight(r, c));
  for (Eigen::Index i = 0; i < model.dense_out_bias.size(); ++i) out.push_back(model.dense_out_bias(i));
  return out;
}

HybridModel unflatten_weights(const HybridModel& templ, std::span<const double> values) {
  const std::size_t expected = templ.parameter_count();
  if (values.size() != expected) {
    throw ShapeError("unflatten: expected " + std::to_string(expected) + " values, got " +
                     std::to_string(values.size()));
  }
  HybridModel m = templ;
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.dense_in_weight.rows(); ++r)
    for (Eigen::Index c = 0; c < m.dense_in_weight.cols(); ++c) m.dense_in_weight(r, c) = values[k++];
  for (Eigen::Index i = 0; i < m.dense_in_bias.size(); ++i) m.dense_in_bias(i) = values[k++];
  for (Eigen::Index l = 0; l < m.angles.rows(); ++l)
    for (Eigen::Index q = 0; q < m.angles.cols(); ++q) m.angles(l, q) = values[k++];
  for (Eigen::Index r = 0; r < m.dense_out_weight.rows(); ++r)
    for (Eigen::Index c = 0; c < m.dense_out_weight.cols(); ++c) m.dense_out_weight(r, c) = values[k++];
  for (Eigen::Index i = 0; i < m.dense_out_bias.size(); ++i) m.dense_out_bias(i) = values[k++];
  return m;
}

ForwardResult forward(const HybridModel& model, const Eigen::MatrixXd& batch) {
  if (batch.cols() != model.shape.feature_count) {
    throw ShapeError("forward: batch has " + std::to_string(batch.cols()) +
                     " features, model expects " + std::to_string(model.shape.feature_count));
  }
  ForwardResult res;
  auto& c = res.cache;
  c.inputs = batch;
  c.pre_activation = (batch * model.dense_in_weight.transpose()).rowwise() +
                     model.dense_in_bias.transpose();
  c.embedding = kPi * c.pre_activation.array().tanh();
  c.readouts.resize(batch.rows(), model.shape.readout_count());
  std::vector<double> angles_in(static_cast<std::size_t>(model.shape.pqc.qubit_count));
  for (Eigen::Index b = 0; b < batch.rows(); ++b) {
    for (std::size_t q = 0; q < angles_in.size(); ++q) angles_in[q] = c.embedding(b, static_cast<Eigen::Index>(q));
    const auto r = qsim::run_pqc(std::span<const double>(angles_in), model.shape.pqc, model.angles);
    for (std::size_t j = 0; j < r.size(); ++j) c.readouts(b, static_cast<Eigen::Index>(j)) = r[j];
  }
  res.logits = (c.readouts * model.dense_out_weight.transpose()).rowwise() +
               model.dense_out_bias.transpose();
  return res;
}

Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd p = logits.colwise() - logits.rowwise().maxCoeff();
  p = p.array().exp();
  p.array().colwise() /= p.rowwise().sum().array();
  return p;
}

namespace {

void check_labels(std::span<const int> labels, Eigen::Index rows, int classes) {
  if (labels.size() != static_cast<std::size_t>(rows)) {
    throw ShapeError("label count does not match batch size");
  }
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw DomainError("label " + std::to_string(y) + " outside [0, " + std::to_string(classes) + ")");
    }
  }
}

}  // namespace

double cross_entropy(const Eigen::MatrixXd& logits, std::span<const int> labels) {
  check_labels(labels, logits.rows(), static_cast<int>(logits.cols()));
  if (logits.rows() == 0) return 0.0;
  double total = 0;
  for (Eigen::Index b = 0; b < logits.rows(); ++b) {
    const double m = logits.row(b).maxCoeff();
    const double lse = m + std::log((logits.row(b).array() - m).exp().sum());
    total += lse - logits(b, labels[static_cast<std::size_t>(b)]);
  }
  return total / static_cast<double>(logits.rows());
}

LossAndGrads loss_and_grads(const HybridModel& model, const Eigen::MatrixXd& batch,
                            std::span<const int> labels) {
  check_labels(labels, batch.rows(), model.shape.class_count);
  if (batch.rows() == 0) throw ShapeError("loss_and_grads: empty batch");
  const auto fwd = forward(model, batch);
  const auto& c = fwd.cache;
  const auto batch_size = static_cast<double>(batch.rows());

  LossAndGrads out;
  out.loss = cross_entropy(fwd.logits, labels);
  out.grads = zero_model(model.shape);
  auto& g = out.grads;

  Eigen::MatrixXd d_logits = softmax(fwd.logits);
  for (Eigen::Index b = 0; b < batch.rows(); ++b) d_logits(b, labels[static_cast<std::size_t>(b)]) -= 1.0;
  d_logits /= batch_size;

  g.dense_out_weight = d_logits.transpose() * c.readouts;
  g.dense_out_bias = d_logits.colwise().sum().transpose();
  const Eigen::MatrixXd d_readouts = d_logits * model.dense_out_weight;  // B x readouts

  const auto q = static_cast<std::size_t>(model.shape.pqc.qubit_count);
  Eigen::MatrixXd d_pre(batch.rows(), static_cast<Eigen::Index>(q));
  std::vector<double> angles_in(q), upstream(static_cast<std::size_t>(d_readouts.cols()));
  for (Eigen::Index b = 0; b < batch.rows(); ++b) {
    for (std::size_t i = 0; i < q; ++i) angles_in[i] = c.embedding(b, static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < upstream.size(); ++j) upstream[j] = d_readouts(b, static_cast<Eigen::Index>(j));
    const std::span<const double> x(angles_in), w(upstream);
    g.angles += qsim::param_shift_grad(x, model.shape.pqc, model.angles, w);
    const auto d_embed = qsim::param_shift_feature_grad(x, model.shape.pqc, model.angles, w);
    for (std::size_t i = 0; i < q; ++i) {
      const double t = std::tanh(c.pre_activation(b, static_cast<Eigen::Index>(i)));
      d_pre(b, static_cast<Eigen::Index>(i)) = d_embed[i] * kPi * (1.0 - t * t);
    }
  }
  g.dense_in_weight = d_pre.transpose() * c.inputs;
  g.dense_in_bias = d_pre.colwise().sum().transpose();
  return out;
}

std::vector<int> predict(const Eigen::MatrixXd& logits) {
  std::vector<int> out(static_cast<std::size_t>(logits.rows()));
  for (Eigen::Index b = 0; b < logits.rows(); ++b) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < logits.cols(); ++k) {
      if (logits(b, k) > logits(b, best)) best = k;
    }
    out[static_cast<std::size_t>(b)] = static_cast<int>(best);
  }
  return out;
}

Evaluation evaluate(const HybridModel& model, const data::Dataset& dataset) {
  if (dataset.size() == 0) throw DomainError("evaluate: empty dataset");
  const auto fwd = forward(model, dataset.features);
  const auto pred = predict(fwd.logits);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == dataset.labels[i];
  return {static_cast<double>(correct) / static_cast<double>(pred.size()),
          cross_entropy(fwd.logits, dataset.labels)};
}

}  // namespace qfl::model
