// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qfl/fhe/ciphertext.hpp"
#include "qfl/federation/metrics.hpp"
#include "qfl/federation/round_config.hpp"
#include "qfl/federation/transport.hpp"
#include "qfl/federation/updates.hpp"

namespace qfl::federation {

/// Chunkwise sum_k mul_plain(ct_k, c_k) with one rescale at the end.
/// Throws ProtocolError on round or duplicate-client mistakes and
/// AlignmentError when chunkings differ.
EncryptedGlobal aggregate(std::span<const ClientUpdate> updates, const fhe::PublicKeyMaterial& keys,
                          int round_index);

/// Same weighted sum on plaintext vectors, accumulated in client id order.
std::vector<double> aggregate_plain(std::span<const PlainUpdate> updates, int round_index);

/// Global row from client rows: n_k-weighted train loss and accuracy.
MetricsRecord combine_client_metrics(std::span<const MetricsRecord> client_rows,
                                     std::span<const double> weights, int round_index);

struct ServerOptions {
  int client_count = 1;
  int rounds = 1;
  Mode mode = Mode::kFhe;
  ConvergenceRule convergence;
  Millis receive_timeout{10000};
  bool record_wall_time = true;
};

struct ServerReport {
  int rounds_run = 0;
  std::vector<MetricsRecord> history;
};

/// Untrusted coordinator. Holds public key material only; it never sees a
/// plaintext model in FHE mode.
class AggregationServer {
 public:
  AggregationServer(ServerOptions options, std::optional<fhe::PublicKeyMaterial> keys);

  /// Runs the JOIN / UPDATE / GLOBAL / METRICS exchange over the given
  /// connections (one per client, any order). On failure every client
  /// receives ABORT and a ProtocolError naming the culprit is thrown.
  ServerReport serve(std::vector<std::unique_ptr<Connection>>& clients,
                     const std::function<void(const MetricsRecord&)>& on_record = {});

  const ServerOptions& options() const { return options_; }
  const fhe::PublicKeyMaterial* public_material() const { return keys_ ? &*keys_ : nullptr; }

 private:
  ServerOptions options_;
  std::optional<fhe::PublicKeyMaterial> keys_;
};

}  // namespace qfl::federation
