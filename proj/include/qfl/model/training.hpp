// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "qfl/data/dataset.hpp"
#include "qfl/model/hybrid_model.hpp"

namespace qfl::model {

struct TrainingConfig {
  double learning_rate = 0.1;
  int batch_size = 32;
  int epochs_per_round = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// W <- W - eta * grad on every parameter.
HybridModel sgd_step(const HybridModel& model, const ModelGradients& grads,
                     const TrainingConfig& config);

struct TrainingResult {
  HybridModel model;
  // Both measured on the local data with the trained weights.
  double train_loss = 0.0;
  double train_accuracy = 0.0;
};

/// Mini-batch SGD for config.epochs_per_round epochs over a seeded shuffle.
TrainingResult train_local(const HybridModel& start, const data::Dataset& local,
                           const TrainingConfig& config);

}  // namespace qfl::model
