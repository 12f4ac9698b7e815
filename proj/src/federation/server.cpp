// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/server.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "qfl/errors.hpp"
#include "qfl/federation/vector_format.hpp"
#include "qfl/fhe/encoder.hpp"
#include "qfl/fhe/evaluator.hpp"

namespace qfl::federation {
namespace {

template <typename Update>
std::vector<const Update*> checked_order(std::span<const Update> updates, int round_index) {
  if (updates.empty()) throw ProtocolError("aggregate: no client updates");
  std::vector<const Update*> order;
  std::set<int> seen;
  for (const auto& u : updates) {
    if (u.round_index != round_index) {
      throw ProtocolError("client " + std::to_string(u.client_id) + " sent an update for round " +
                          std::to_string(u.round_index) + " during round " +
                          std::to_string(round_index));
    }
    if (!seen.insert(u.client_id).second) {
      throw ProtocolError("duplicate update from client " + std::to_string(u.client_id));
    }
    if (u.sample_count == 0) {
      throw ProtocolError("client " + std::to_string(u.client_id) + " reported zero samples");
    }
    order.push_back(&u);
  }
  std::sort(order.begin(), order.end(),
            [](const Update* a, const Update* b) { return a->client_id < b->client_id; });
  return order;
}

template <typename Update>
std::vector<double> weights_of(const std::vector<const Update*>& order) {
  double total = 0;
  for (const auto* u : order) total += static_cast<double>(u->sample_count);
  std::vector<double> c;
  for (const auto* u : order) c.push_back(static_cast<double>(u->sample_count) / total);
  return c;
}

}  // namespace

EncryptedGlobal aggregate(std::span<const ClientUpdate> updates, const fhe::PublicKeyMaterial& keys,
                          int round_index) {
  const auto order = checked_order(updates, round_index);
  const auto& params = keys.params;
  const std::size_t params_count = order.front()->parameter_count;
  for (const auto* u : order) {
    check_chunking(*u, params);
    if (u->parameter_count != params_count) {
      throw AlignmentError("client " + std::to_string(u->client_id) + " sent " +
                           std::to_string(u->parameter_count) + " parameters, expected " +
                           std::to_string(params_count));
    }
  }
  const auto c = weights_of(order);

  EncryptedGlobal out;
  out.round_index = round_index;
  out.parameter_count = params_count;
  const std::size_t chunks = order.front()->ciphertexts.size();
  for (std::size_t i = 0; i < chunks; ++i) {
    std::optional<fhe::Ciphertext> sum;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto& ct = order[k]->ciphertexts[i];
      auto term = fhe::mul_plain(ct, fhe::encode_constant(c[k], params, ct.level));
      sum = sum ? fhe::add_ct(*sum, term) : std::move(term);
    }
    out.ciphertexts.push_back(fhe::rescale(*sum));
  }
  return out;
}

std::vector<double> aggregate_plain(std::span<const PlainUpdate> updates, int round_index) {
  const auto order = checked_order(updates, round_index);
  const std::size_t n = order.front()->values.size();
  for (const auto* u : order) {
    if (u->values.size() != n) {
      throw AlignmentError("client " + std::to_string(u->client_id) + " sent " +
                           std::to_string(u->values.size()) + " parameters, expected " +
                           std::to_string(n));
    }
  }
  const auto c = weights_of(order);
  std::vector<double> sum(n, 0.0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t j = 0; j < n; ++j) sum[j] += c[k] * order[k]->values[j];
  }
  return sum;
}

MetricsRecord combine_client_metrics(std::span<const MetricsRecord> client_rows,
                                     std::span<const double> weights, int round_index) {
  MetricsRecord g;
  g.round = round_index;
  g.actor = kGlobalActor;
  double loss = 0, acc = 0;
  bool have = !client_rows.empty();
  for (std::size_t k = 0; k < client_rows.size(); ++k) {
    if (!client_rows[k].train_loss || !client_rows[k].train_acc) {
      have = false;
      break;
    }
    loss += weights[k] * *client_rows[k].train_loss;
    acc += weights[k] * *client_rows[k].train_acc;
  }
  if (have) {
    g.train_loss = loss;
    g.train_acc = acc;
  }
  return g;
}

AggregationServer::AggregationServer(ServerOptions options,
                                     std::optional<fhe::PublicKeyMaterial> keys)
    : options_(std::move(options)), keys_(std::move(keys)) {
  if (options_.client_count < 1) throw ConfigError("server needs at least one client");
  if (options_.rounds < 0 || options_.rounds > 65535) throw ConfigError("server rounds out of range");
  if (options_.mode == Mode::kFhe && !keys_) {
    throw ConfigError("FHE mode server needs public key material");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

Frame expect(Connection& conn, MessageType type, int round, Millis timeout, const std::string& who) {
  Frame f;
  try {
    f = conn.receive(timeout);
  } catch (const ProtocolError& e) {
    throw ProtocolError(who + ": " + e.what());
  }
  if (f.type == MessageType::kAbort) throw ProtocolError(who + " aborted: " + abort_reason(f));
  if (f.type != type) {
    throw ProtocolError(who + ": expected " + to_string(type) + ", got " + to_string(f.type));
  }
  if (f.round != round) {
    throw ProtocolError(who + ": " + to_string(type) + " for round " + std::to_string(f.round) +
                        " during round " + std::to_string(round));
  }
  return f;
}

MetricsRecord parse_metrics_frame(const Frame& f, const std::string& who) {
  try {
    return parse_metrics_line(std::string(f.payload.begin(), f.payload.end()));
  } catch (const FormatError& e) {
    throw ProtocolError(who + ": " + e.what());
  }
}

}  // namespace

ServerReport AggregationServer::serve(std::vector<std::unique_ptr<Connection>>& clients,
                                      const std::function<void(const MetricsRecord&)>& on_record) {
  const int n = options_.client_count;
  const auto timeout = options_.receive_timeout;
  ServerReport report;
  int round = 0;
  try {
    if (clients.size() != static_cast<std::size_t>(n)) {
      throw ProtocolError("expected " + std::to_string(n) + " client connections, have " +
                          std::to_string(clients.size()));
    }
    // JOIN: map client ids onto connections.
    std::vector<Connection*> by_id(static_cast<std::size_t>(n), nullptr);
    std::vector<std::size_t> samples(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < clients.size(); ++i) {
      const std::string who = "connection " + std::to_string(i);
      const auto join = decode_join(expect(*clients[i], MessageType::kJoin, 0, timeout, who).payload);
      if (join.client_id < 0 || join.client_id >= n) {
        throw ProtocolError(who + ": client id " + std::to_string(join.client_id) + " out of range");
      }
      auto& slot = by_id[static_cast<std::size_t>(join.client_id)];
      if (slot) throw ProtocolError(who + ": client id " + std::to_string(join.client_id) + " joined twice");
      if (join.mode != static_cast<std::uint8_t>(options_.mode)) {
        throw ProtocolError("client " + std::to_string(join.client_id) + " joined in the wrong mode");
      }
      if (keys_ && join.params_digest != keys_->params.digest()) {
        throw ProtocolError("client " + std::to_string(join.client_id) +
                            " uses different encryption parameters");
      }
      if (join.sample_count == 0) {
        throw ProtocolError("client " + std::to_string(join.client_id) + " has no samples");
      }
      slot = clients[i].get();
      samples[static_cast<std::size_t>(join.client_id)] = join.sample_count;
    }
    RoundConfig weights_cfg;
    weights_cfg.client_count = n;
    weights_cfg.sample_counts = samples;
    const auto weights = weights_cfg.client_weights();

    std::optional<double> previous_loss;
    for (round = 1; round <= options_.rounds; ++round) {
      const auto t0 = Clock::now();
      std::vector<ClientUpdate> enc;
      std::vector<PlainUpdate> plain;
      std::vector<MetricsRecord> rows;
      for (int k = 0; k < n; ++k) {
        const std::string who = "client " + std::to_string(k);
        Connection& conn = *by_id[static_cast<std::size_t>(k)];
        const Frame f = expect(conn, MessageType::kUpdate, round, timeout, who);
        try {
          ByteReader in(f.payload);
          if (options_.mode == Mode::kFhe) {
            enc.push_back(read_update(in));
            enc.back().round_index = round;
          } else {
            plain.push_back(read_plain_update(in));
            plain.back().round_index = round;
          }
        } catch (const FormatError& e) {
          throw ProtocolError(who + ": malformed UPDATE: " + e.what());
        }
        const int claimed = options_.mode == Mode::kFhe ? enc.back().client_id : plain.back().client_id;
        const std::size_t claimed_n =
            options_.mode == Mode::kFhe ? enc.back().sample_count : plain.back().sample_count;
        if (claimed != k || claimed_n != samples[static_cast<std::size_t>(k)]) {
          throw ProtocolError(who + ": UPDATE does not match its JOIN");
        }
        auto row = parse_metrics_frame(expect(conn, MessageType::kMetrics, round, timeout, who), who);
        if (row.actor != client_actor(k) || row.round != round) {
          throw ProtocolError(who + ": METRICS row has the wrong actor or round");
        }
        rows.push_back(std::move(row));
      }

      Bytes body{0};  // flags byte, filled in below
      try {
        if (options_.mode == Mode::kFhe) {
          write_global(aggregate(enc, *keys_, round), body);
        } else {
          write_vector(aggregate_plain(plain, round), body);
        }
      } catch (const AlignmentError& e) {
        throw ProtocolError(std::string("aggregation failed: ") + e.what());
      }

      auto global_row = combine_client_metrics(rows, weights, round);
      const double loss = global_row.train_loss.value_or(0.0);
      const bool final_round = round == options_.rounds ||
                               (previous_loss && options_.convergence.converged(*previous_loss, loss));
      previous_loss = loss;

      Frame g;
      g.type = MessageType::kGlobal;
      g.round = static_cast<std::uint16_t>(round);
      body[0] = final_round ? kGlobalFinal : 0;
      g.payload = std::move(body);
      for (auto* conn : by_id) conn->send(g);

      // Client 0 evaluates the decrypted global model on the test split.
      const auto eval = parse_metrics_frame(
          expect(*by_id[0], MessageType::kMetrics, round, timeout, "client 0"), "client 0");
      if (eval.actor != kGlobalActor || eval.round != round) {
        throw ProtocolError("client 0: expected the global evaluation row");
      }
      global_row.test_loss = eval.test_loss;
      global_row.test_acc = eval.test_acc;
      global_row.wall_ms = options_.record_wall_time
                               ? std::chrono::duration<double, std::milli>(Clock::now() - t0).count()
                               : 0.0;
      rows.push_back(std::move(global_row));
      for (const auto& r : rows) {
        if (on_record) on_record(r);
        report.history.push_back(r);
      }
      report.rounds_run = round;
      if (final_round) break;
    }
  } catch (const Error& e) {
    const auto abort = abort_frame(static_cast<std::uint16_t>(std::max(round, 0)), e.what());
    for (auto& c : clients) {
      try {
        c->send(abort);
      } catch (const Error&) {
        // Peer already gone.
      }
    }
    throw ProtocolError(std::string("round ") + std::to_string(round) + " aborted: " + e.what());
  }
  return report;
}

}  // namespace qfl::federation
