// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <vector>

#include "qfl/data/dataset.hpp"
#include "qfl/fhe/keys.hpp"
#include "qfl/federation/client.hpp"
#include "qfl/federation/metrics.hpp"
#include "qfl/federation/quantization.hpp"
#include "qfl/federation/round_config.hpp"
#include "qfl/federation/transport.hpp"
#include "qfl/model/hybrid_model.hpp"

namespace qfl::federation {

struct FederationSetup {
  RoundConfig config;
  std::vector<data::Dataset> client_data;  // one per client, index = client id
  data::Dataset test;                      // may be empty
  Mode mode = Mode::kFhe;
  QuantizationSpec quantization;
  const fhe::KeyMaterial* keys = nullptr;  // required in FHE mode
  PqcHook optimize_pqc;
  bool record_wall_time = true;

  /// Per-client sample counts: config.sample_counts, or the dataset sizes when empty.
  std::vector<std::size_t> sample_counts() const;
  std::vector<double> client_weights() const;
  /// Checks every section before any work starts. Throws ConfigError.
  void validate(const model::HybridModel& initial) const;
};

struct RoundResult {
  model::HybridModel global;
  std::vector<MetricsRecord> metrics;  // clients by id, then the global row
  double train_loss = 0.0;             // n_k-weighted client training loss
};

/// One synchronous round: every client trains from `global`, the server
/// aggregates, the result is decrypted client-side.
RoundResult run_round(const FederationSetup& setup, const model::HybridModel& global,
                      int round_index);

struct TrainingRun {
  model::HybridModel final_model;
  std::vector<model::HybridModel> round_models;  // global model after each round
  std::vector<MetricsRecord> history;
  int rounds_run = 0;
  double wall_ms = 0.0;
};

using RecordCallback = std::function<void(const MetricsRecord&)>;

TrainingRun run_federated_training(const FederationSetup& setup, const model::HybridModel& initial,
                                   const RecordCallback& on_record = {});

struct FaultInjection {
  int client_id = -1;  // -1: none
  int round_index = 1;
  std::size_t byte_offset = 3;  // within the UPDATE frame; 0..3 hit the length prefix
  std::uint8_t xor_mask = 0xFF;
};

struct NetworkOptions {
  TransportKind transport = TransportKind::kLoopback;
  Millis receive_timeout{10000};
  std::size_t max_frame_bytes = kDefaultMaxFrameBytes;
  FaultInjection fault;
};

/// Same protocol as AggregationServer::serve with each client on its own thread.
TrainingRun run_networked_training(const FederationSetup& setup, const model::HybridModel& initial,
                                   const NetworkOptions& options,
                                   const RecordCallback& on_record = {});

}  // namespace qfl::federation
