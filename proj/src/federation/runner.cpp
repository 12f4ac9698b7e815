// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/runner.hpp"

#include <exception>
#include <future>
#include <string>
#include <thread>

#include "qfl/errors.hpp"
#include "qfl/federation/server.hpp"
#include "qfl/federation/vector_format.hpp"
#include "qfl/fhe/serialization.hpp"
#include "qfl/model/training.hpp"

namespace qfl::federation {

std::vector<std::size_t> FederationSetup::sample_counts() const {
  if (!config.sample_counts.empty()) return config.sample_counts;
  std::vector<std::size_t> n;
  for (const auto& d : client_data) n.push_back(d.size());
  return n;
}

std::vector<double> FederationSetup::client_weights() const {
  RoundConfig c = config;
  c.sample_counts = sample_counts();
  return c.client_weights();
}

void FederationSetup::validate(const model::HybridModel& initial) const {
  RoundConfig c = config;
  c.sample_counts = sample_counts();
  c.validate();
  if (client_data.size() != static_cast<std::size_t>(c.client_count)) {
    throw ConfigError("have " + std::to_string(client_data.size()) + " client datasets for " +
                      std::to_string(c.client_count) + " clients");
  }
  try {
    initial.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("initial model: ") + e.what());
  }
  for (std::size_t k = 0; k < client_data.size(); ++k) {
    const auto& d = client_data[k];
    if (d.size() != c.sample_counts[k]) {
      throw ConfigError("client " + std::to_string(k) + " declares " +
                        std::to_string(c.sample_counts[k]) + " samples but holds " +
                        std::to_string(d.size()));
    }
    if (d.dims() != initial.shape.feature_count || d.class_count > initial.shape.class_count) {
      throw ConfigError("client " + std::to_string(k) + " data does not fit the model shape");
    }
  }
  if (test.size() > 0 && test.dims() != initial.shape.feature_count) {
    throw ConfigError("test data does not fit the model shape");
  }
  quantization.validate();
  if (mode == Mode::kFhe) {
    if (!keys) throw ConfigError("FHE mode needs key material");
    if (chunk_count(initial.parameter_count(), keys->params().slot_count()) == 0) {
      throw ConfigError("model has no parameters");
    }
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0, bool record) {
  return record ? std::chrono::duration<double, std::milli>(Clock::now() - t0).count() : 0.0;
}

struct LocalStep {
  MetricsRecord row;
  ClientUpdate encrypted;
  PlainUpdate plain;
};

LocalStep local_step(const FederationSetup& s, const model::HybridModel& global, int round, int k) {
  const auto t0 = Clock::now();
  const auto& data = s.client_data[static_cast<std::size_t>(k)];
  auto trained = model::train_local(global, data, client_training_config(s.config, round, k));
  LocalStep out;
  if (s.mode == Mode::kFhe) {
    out.encrypted = encrypt_model(trained.model, s.quantization, s.keys->public_material(), k, round,
                                  data.size(), derive_seed(s.config.seed, round, k, kSeedEncryption));
  } else {
    out.plain = PlainUpdate{k, round, data.size(), model::flatten_weights(trained.model)};
  }
  out.row.round = round;
  out.row.actor = client_actor(k);
  out.row.train_loss = trained.train_loss;
  out.row.train_acc = trained.train_accuracy;
  out.row.wall_ms = ms_since(t0, s.record_wall_time);
  return out;
}

MetricsRecord evaluate_global(const FederationSetup& s, const model::HybridModel& global, int round) {
  MetricsRecord r;
  r.round = round;
  r.actor = kGlobalActor;
  if (s.test.size() > 0) {
    const auto e = model::evaluate(global, s.test);
    r.test_loss = e.mean_loss;
    r.test_acc = e.accuracy;
  }
  return r;
}

}  // namespace

RoundResult run_round(const FederationSetup& s, const model::HybridModel& global, int round_index) {
  const auto t0 = Clock::now();
  const int n = s.config.client_count;
  std::vector<std::future<LocalStep>> jobs;
  for (int k = 0; k < n; ++k) {
    jobs.push_back(std::async(std::launch::async, [&, k] { return local_step(s, global, round_index, k); }));
  }
  std::vector<LocalStep> steps;
  std::string failure;
  for (int k = 0; k < n; ++k) {
    try {
      steps.push_back(jobs[static_cast<std::size_t>(k)].get());
    } catch (const std::exception& e) {
      if (failure.empty()) {
        failure = "client " + std::to_string(k) + " failed in round " + std::to_string(round_index) +
                  ": " + e.what();
      }
    }
  }
  if (!failure.empty()) throw ProtocolError(failure);

  RoundResult out;
  if (s.mode == Mode::kFhe) {
    std::vector<ClientUpdate> updates;
    for (auto& st : steps) updates.push_back(std::move(st.encrypted));
    const auto agg = aggregate(updates, s.keys->public_material(), round_index);
    out.global = decrypt_and_load(agg, *s.keys, global);
  } else {
    std::vector<PlainUpdate> updates;
    for (auto& st : steps) updates.push_back(std::move(st.plain));
    out.global = model::unflatten_weights(global, aggregate_plain(updates, round_index));
  }
  if (s.optimize_pqc) s.optimize_pqc(out.global, round_index);

  for (auto& st : steps) out.metrics.push_back(st.row);
  auto g = combine_client_metrics(out.metrics, s.client_weights(), round_index);
  const auto eval = evaluate_global(s, out.global, round_index);
  g.test_loss = eval.test_loss;
  g.test_acc = eval.test_acc;
  g.wall_ms = ms_since(t0, s.record_wall_time);
  out.train_loss = g.train_loss.value_or(0.0);
  out.metrics.push_back(std::move(g));
  return out;
}

TrainingRun run_federated_training(const FederationSetup& s, const model::HybridModel& initial,
                                   const RecordCallback& on_record) {
  s.validate(initial);
  const auto t0 = Clock::now();
  TrainingRun run;
  run.final_model = initial;
  std::optional<double> previous_loss;
  for (int r = 1; r <= s.config.rounds; ++r) {
    auto res = run_round(s, run.final_model, r);
    for (const auto& row : res.metrics) {
      if (on_record) on_record(row);
      run.history.push_back(row);
    }
    run.final_model = std::move(res.global);
    run.round_models.push_back(run.final_model);
    run.rounds_run = r;
    const bool stop = previous_loss && s.config.convergence.converged(*previous_loss, res.train_loss);
    previous_loss = res.train_loss;
    if (stop) break;
  }
  run.wall_ms = ms_since(t0, true);
  return run;
}

namespace {

struct ClientOutcome {
  model::HybridModel final_model;
  std::vector<model::HybridModel> round_models;
  std::exception_ptr error;
};

Frame frame_of(MessageType type, int round, Bytes payload) {
  Frame f;
  f.type = type;
  f.round = static_cast<std::uint16_t>(round);
  f.payload = std::move(payload);
  return f;
}

Frame metrics_frame(const MetricsRecord& r) {
  const auto line = to_json_line(r);
  return frame_of(MessageType::kMetrics, r.round, Bytes(line.begin(), line.end()));
}

void run_client(const FederationSetup& s, const model::HybridModel& initial, int k,
                Connection& conn, const NetworkOptions& opt, ClientOutcome& out) {
  int round = 0;
  try {
    JoinPayload join{k, s.client_data[static_cast<std::size_t>(k)].size(),
                     static_cast<std::uint8_t>(s.mode),
                     s.mode == Mode::kFhe ? s.keys->params().digest() : 0};
    conn.send(frame_of(MessageType::kJoin, 0, encode_join(join)));
    model::HybridModel global = initial;
    for (round = 1; round <= s.config.rounds; ++round) {
      const auto step = local_step(s, global, round, k);
      Bytes body;
      if (s.mode == Mode::kFhe) {
        write_update(step.encrypted, body);
      } else {
        write_update(step.plain, body);
      }
      const auto update = frame_of(MessageType::kUpdate, round, std::move(body));
      if (opt.fault.client_id == k && opt.fault.round_index == round) {
        auto bytes = encode_frame(update);
        bytes.at(opt.fault.byte_offset) ^= opt.fault.xor_mask;
        conn.send_raw(bytes);
      } else {
        conn.send(update);
      }
      conn.send(metrics_frame(step.row));

      const Frame g = conn.receive(opt.receive_timeout);
      if (g.type == MessageType::kAbort) {
        throw ProtocolError("server aborted: " + abort_reason(g));
      }
      if (g.type != MessageType::kGlobal || g.round != round || g.payload.empty()) {
        throw ProtocolError("client " + std::to_string(k) + ": expected GLOBAL for round " +
                            std::to_string(round));
      }
      const bool final_round = g.payload[0] & kGlobalFinal;
      try {
        ByteReader in(std::span<const std::uint8_t>(g.payload).subspan(1));
        if (s.mode == Mode::kFhe) {
          global = decrypt_and_load(read_global(in), *s.keys, global);
        } else {
          auto values = read_vector(in);
          if (!in.done()) throw FormatError("global: trailing bytes");
          global = model::unflatten_weights(global, values);
        }
      } catch (const FormatError& e) {
        throw ProtocolError("client " + std::to_string(k) + ": malformed GLOBAL: " + e.what());
      }
      if (s.optimize_pqc) s.optimize_pqc(global, round);
      if (k == 0) {
        conn.send(metrics_frame(evaluate_global(s, global, round)));
        out.round_models.push_back(global);
      }
      if (final_round) break;
    }
    out.final_model = std::move(global);
  } catch (const std::exception& e) {
    out.error = std::current_exception();
    try {
      conn.send(abort_frame(static_cast<std::uint16_t>(round),
                            "client " + std::to_string(k) + ": " + e.what()));
    } catch (const std::exception&) {
      // Server already gone.
    }
  }
}

}  // namespace

TrainingRun run_networked_training(const FederationSetup& s, const model::HybridModel& initial,
                                   const NetworkOptions& options, const RecordCallback& on_record) {
  s.validate(initial);
  const auto t0 = Clock::now();
  const int n = s.config.client_count;

  // The server only ever sees the serialized public half.
  std::optional<fhe::PublicKeyMaterial> pub;
  if (s.mode == Mode::kFhe) {
    const auto& km = s.keys->public_material();
    pub = fhe::deserialize_public_material(km.params, fhe::serialize_public_key(km),
                                           fhe::serialize_galois_keys(km));
  }
  ServerOptions so;
  so.client_count = n;
  so.rounds = s.config.rounds;
  so.mode = s.mode;
  so.convergence = s.config.convergence;
  so.receive_timeout = options.receive_timeout;
  so.record_wall_time = s.record_wall_time;
  AggregationServer server(so, std::move(pub));

  std::vector<std::unique_ptr<Connection>> server_side;
  std::vector<std::unique_ptr<Connection>> client_side(static_cast<std::size_t>(n));
  std::vector<ClientOutcome> outcomes(static_cast<std::size_t>(n));
  std::vector<std::thread> threads;
  std::unique_ptr<SocketListener> listener;

  auto start_client = [&](int k) {
    threads.emplace_back([&, k] {
      auto& conn = client_side[static_cast<std::size_t>(k)];
      try {
        if (!conn) {
          conn = connect_socket("127.0.0.1", listener->port(), options.receive_timeout,
                                options.max_frame_bytes);
        }
      } catch (const std::exception&) {
        outcomes[static_cast<std::size_t>(k)].error = std::current_exception();
        return;
      }
      run_client(s, initial, k, *conn, options, outcomes[static_cast<std::size_t>(k)]);
    });
  };

  std::exception_ptr server_error;
  ServerReport report;
  try {
    if (options.transport == TransportKind::kLoopback) {
      for (int k = 0; k < n; ++k) {
        auto [a, b] = make_loopback_pair(options.max_frame_bytes);
        server_side.push_back(std::move(a));
        client_side[static_cast<std::size_t>(k)] = std::move(b);
      }
      for (int k = 0; k < n; ++k) start_client(k);
    } else {
      listener = std::make_unique<SocketListener>(0, options.max_frame_bytes);
      for (int k = 0; k < n; ++k) start_client(k);
      for (int k = 0; k < n; ++k) server_side.push_back(listener->accept(options.receive_timeout));
    }
    report = server.serve(server_side, on_record);
  } catch (const std::exception&) {
    server_error = std::current_exception();
    for (auto& c : server_side) c->close();
  }
  for (auto& t : threads) t.join();
  if (server_error) std::rethrow_exception(server_error);
  for (int k = 0; k < n; ++k) {
    if (auto e = outcomes[static_cast<std::size_t>(k)].error) {
      try {
        std::rethrow_exception(e);
      } catch (const std::exception& ex) {
        throw ProtocolError("client " + std::to_string(k) + " failed: " + ex.what());
      }
    }
  }

  TrainingRun run;
  run.final_model = n > 0 ? outcomes[0].final_model : initial;
  run.round_models = std::move(outcomes[0].round_models);
  run.history = std::move(report.history);
  run.rounds_run = report.rounds_run;
  run.wall_ms = ms_since(t0, true);
  return run;
}

}  // namespace qfl::federation
