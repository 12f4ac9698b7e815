// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/model/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qfl/errors.hpp"

namespace qfl::model {

void TrainingConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite and non-negative");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (epochs_per_round < 0) throw ConfigError("epochs_per_round must be non-negative");
}

HybridModel sgd_step(const HybridModel& model, const ModelGradients& grads,
                     const TrainingConfig& config) {
  if (!(model.shape == grads.shape)) throw ShapeError("sgd_step: gradient shape mismatch");
  const double eta = config.learning_rate;
  HybridModel out = model;
  out.dense_in_weight -= eta * grads.dense_in_weight;
  out.dense_in_bias -= eta * grads.dense_in_bias;
  out.angles -= eta * grads.angles;
  out.dense_out_weight -= eta * grads.dense_out_weight;
  out.dense_out_bias -= eta * grads.dense_out_bias;
  return out;
}

TrainingResult train_local(const HybridModel& start, const data::Dataset& local,
                           const TrainingConfig& config) {
  config.validate();
  start.validate();
  if (local.size() == 0) throw DomainError("train_local: client has no samples");
  if (local.features.cols() != start.shape.feature_count) {
    throw ShapeError("train_local: dataset feature count does not match the model");
  }

  HybridModel model = start;
  std::mt19937_64 rng(config.rng_seed);
  std::vector<Eigen::Index> order(local.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto n = static_cast<Eigen::Index>(local.size());
  const auto bs = static_cast<Eigen::Index>(config.batch_size);

  Eigen::MatrixXd batch;
  std::vector<int> labels;
  for (int epoch = 0; epoch < config.epochs_per_round; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index begin = 0; begin < n; begin += bs) {
      const Eigen::Index rows = std::min(bs, n - begin);
      batch.resize(rows, local.features.cols());
      labels.resize(static_cast<std::size_t>(rows));
      for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index src = order[static_cast<std::size_t>(begin + r)];
        batch.row(r) = local.features.row(src);
        labels[static_cast<std::size_t>(r)] = local.labels[static_cast<std::size_t>(src)];
      }
      model = sgd_step(model, loss_and_grads(model, batch, labels).grads, config);
    }
  }

  const auto eval = evaluate(model, local);
  return {std::move(model), eval.mean_loss, eval.accuracy};
}

}  // namespace qfl::model
