// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfl/model/training.hpp"

namespace qfl::federation {

/// Stop after `rounds`, or earlier once the weighted client training loss
/// moves by less than `loss_delta` between consecutive rounds.
struct ConvergenceRule {
  std::optional<double> loss_delta;

  bool converged(double previous_loss, double current_loss) const;
};

struct RoundConfig {
  int client_count = 1;
  int rounds = 1;
  std::vector<std::size_t> sample_counts;  // n_k, one per client
  model::TrainingConfig training;          // epochs, learning rate, batch size
  ConvergenceRule convergence;
  std::uint64_t seed = 0;

  void validate() const;
  /// c_k = n_k / n_total.
  std::vector<double> client_weights() const;
};

enum class Mode { kFhe, kPlaintext };
const char* to_string(Mode mode);

/// Independent stream per (seed, round, client, purpose).
std::uint64_t derive_seed(std::uint64_t seed, int round_index, int client_id, std::uint32_t purpose);

inline constexpr std::uint32_t kSeedTraining = 1;
inline constexpr std::uint32_t kSeedEncryption = 2;

/// Training config a client uses in the given round.
model::TrainingConfig client_training_config(const RoundConfig& config, int round_index, int client_id);

}  // namespace qfl::federation
