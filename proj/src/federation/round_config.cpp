// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/round_config.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::federation {

bool ConvergenceRule::converged(double previous_loss, double current_loss) const {
  return loss_delta && std::abs(current_loss - previous_loss) < *loss_delta;
}

void RoundConfig::validate() const {
  if (client_count < 1) throw ConfigError("client_count must be at least 1");
  if (rounds < 0) throw ConfigError("rounds must be non-negative");
  if (rounds > 65535) throw ConfigError("rounds must fit the 16-bit round index");
  if (sample_counts.size() != static_cast<std::size_t>(client_count)) {
    throw ConfigError("sample_counts has " + std::to_string(sample_counts.size()) +
                      " entries for " + std::to_string(client_count) + " clients");
  }
  for (std::size_t k = 0; k < sample_counts.size(); ++k) {
    if (sample_counts[k] < 1) {
      throw ConfigError("client " + std::to_string(k) + " has no samples");
    }
  }
  if (convergence.loss_delta && !(*convergence.loss_delta > 0.0)) {
    throw ConfigError("convergence loss_delta must be positive");
  }
  training.validate();
}

std::vector<double> RoundConfig::client_weights() const {
  const double total = static_cast<double>(
      std::accumulate(sample_counts.begin(), sample_counts.end(), std::size_t{0}));
  std::vector<double> c(sample_counts.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = static_cast<double>(sample_counts[k]) / total;
  return c;
}

const char* to_string(Mode mode) { return mode == Mode::kFhe ? "fhe" : "plaintext"; }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, int round_index, int client_id, std::uint32_t purpose) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ static_cast<std::uint32_t>(round_index));
  h = splitmix(h ^ static_cast<std::uint32_t>(client_id));
  return splitmix(h ^ purpose);
}

model::TrainingConfig client_training_config(const RoundConfig& config, int round_index, int client_id) {
  model::TrainingConfig t = config.training;
  t.rng_seed = derive_seed(config.seed, round_index, client_id, kSeedTraining);
  return t;
}

}  // namespace qfl::federation
