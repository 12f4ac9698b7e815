// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion, exits non-zero
// if any fails. A criterion also fails when it exceeds its runtime budget.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "qfl/cli/commands.hpp"
#include "qfl/cli/config.hpp"
#include "qfl/errors.hpp"
#include "qfl/federation/client.hpp"
#include "qfl/federation/runner.hpp"
#include "qfl/federation/server.hpp"
#include "qfl/fhe/decryptor.hpp"
#include "qfl/fhe/encoder.hpp"
#include "qfl/fhe/evaluator.hpp"
#include "qfl/fhe/key_files.hpp"
#include "qfl/fhe/keys.hpp"
#include "qfl/fhe/ntt.hpp"
#include "qfl/model/hybrid_model.hpp"
#include "qfl/model/training.hpp"
#include "qfl/qsim/pqc.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace qfl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

fs::path g_work;

// --- 1 ---------------------------------------------------------------------

Outcome fhe_roundtrip() {
  const auto params = fhe::EncryptionParams::defaults();
  const auto keys = fhe::keygen(params, {}, 101);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(params.slot_count());
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    for (auto& x : v) x = u(rng);
    const auto ct = fhe::encrypt(fhe::encode(v, params, params.max_level()), keys, rng());
    worst = std::max(worst, max_abs_diff(fhe::decode(fhe::decrypt(ct, keys), v.size()), v));
  }
  const double tol = std::ldexp(1.0, -18);
  return {worst <= tol, "N=" + std::to_string(params.ring_degree) + ", 1000 x " +
                            std::to_string(v.size()) + " slots, max err " + fmt(worst) +
                            " (tol " + fmt(tol) + ")"};
}

// --- 2 ---------------------------------------------------------------------

double oracle_quantize(double x) {
  return std::round(std::clamp(x, -8.0, 8.0) * 65536.0) / 65536.0;
}

model::ModelShape random_shape(std::mt19937_64& rng, int max_features, int max_qubits, int max_depth) {
  model::ModelShape s;
  s.feature_count = 1 + static_cast<int>(rng() % max_features);
  s.class_count = 2 + static_cast<int>(rng() % 4);
  s.pqc.qubit_count = 1 + static_cast<int>(rng() % max_qubits);
  s.pqc.depth = 1 + static_cast<int>(rng() % max_depth);
  for (int l = 0; l < s.pqc.depth; ++l) s.pqc.layer_axes.push_back(static_cast<qsim::Axis>(rng() % 3));
  return s;
}

Outcome aggregation_oracle() {
  const auto params = fhe::EncryptionParams::defaults();
  const auto keys = fhe::keygen(params, {}, 202);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-9.0, 9.0);  // exercises clipping too
  double worst = 0;
  int multi_chunk = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const auto shape = random_shape(rng, 700, 4, 3);
    std::vector<federation::ClientUpdate> ups;
    std::vector<std::vector<double>> raw;
    std::vector<std::size_t> samples;
    for (int k = 0; k < n; ++k) {
      auto m = model::zero_model(shape);
      auto w = model::flatten_weights(m);
      for (auto& x : w) x = u(rng);
      m = model::unflatten_weights(m, w);
      samples.push_back(1 + rng() % 1000);
      raw.push_back(w);
      ups.push_back(federation::encrypt_model(m, {}, keys.public_material(), k, 1, samples.back(), rng()));
    }
    if (ups.front().ciphertexts.size() > 1) ++multi_chunk;
    const auto global = federation::aggregate(ups, keys.public_material(), 1);
    const auto got = federation::decrypt_vector(global.ciphertexts, keys, raw.front().size());

    double total = 0;
    for (auto s : samples) total += static_cast<double>(s);
    std::vector<double> expect(raw.front().size(), 0.0);
    for (int k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < expect.size(); ++i) {
        expect[i] += static_cast<double>(samples[k]) / total * oracle_quantize(raw[k][i]);
      }
    }
    worst = std::max(worst, max_abs_diff(got, expect));
  }
  return {worst <= 1e-4, "100 trials, N in [2,8], " + std::to_string(multi_chunk) +
                             " multi-ciphertext, max err " + fmt(worst) + " (tol 1e-4)"};
}

// --- 3 ---------------------------------------------------------------------

Outcome ntt_vs_schoolbook() {
  std::mt19937_64 rng(3);
  int mismatches = 0, pairs = 0;
  for (std::size_t n : {8u, 16u}) {
    const auto moduli = fhe::ntt_primes_above(30, n, 2);
    for (int t = 0; t < 1000; ++t) {
      fhe::RingPoly a(n, moduli), b(n, moduli);
      for (std::size_t k = 0; k < moduli.size(); ++k) {
        std::uniform_int_distribution<fhe::u64> d(0, moduli[k] - 1);
        for (auto& x : a.residues(k)) x = d(rng);
        for (auto& x : b.residues(k)) x = d(rng);
      }
      ++pairs;
      if (!(fhe::ring_mul(a, b) == testing::schoolbook_negacyclic(a, b))) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(pairs) + " pairs over N in {8,16}, " +
                               std::to_string(mismatches) + " mismatches"};
}

// --- 4 ---------------------------------------------------------------------

// Independent simulator: full 2^n x 2^n unitaries from Kronecker products.
using CMat = Eigen::MatrixXcd;

CMat gate_on(int n, int q, const Eigen::Matrix2cd& g) {
  CMat m = CMat::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    const CMat f = i == q ? CMat(g) : CMat(CMat::Identity(2, 2));
    CMat k(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) k.block(2 * r, 2 * c, 2, 2) = m(r, c) * f;
    m = k;
  }
  return m;
}

Eigen::Matrix2cd rot(qsim::Axis axis, double t) {
  const std::complex<double> i(0, 1);
  Eigen::Matrix2cd p;
  switch (axis) {
    case qsim::Axis::kX: p << 0, 1, 1, 0; break;
    case qsim::Axis::kY: p << 0, -i, i, 0; break;
    case qsim::Axis::kZ: p << 1, 0, 0, -1; break;
  }
  return std::cos(t / 2) * Eigen::Matrix2cd::Identity() - i * std::sin(t / 2) * p;
}

CMat cnot(int n, int c, int t) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat m = CMat::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const bool ctl = (b >> (n - 1 - c)) & 1;
    m(ctl ? b ^ (Eigen::Index{1} << (n - 1 - t)) : b, b) = 1.0;
  }
  return m;
}

double oracle_readout(const std::vector<double>& x, const qsim::PqcArchitecture& arch,
                      const qsim::PqcParams<double>& th, const std::vector<double>& w) {
  const int n = arch.qubit_count;
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(Eigen::Index{1} << n);
  s(0) = 1.0;
  for (int q = 0; q < n; ++q) s = gate_on(n, q, rot(qsim::Axis::kX, x[q])) * s;
  for (int l = 0; l < arch.depth; ++l) {
    for (int q = 0; q < n; ++q) s = gate_on(n, q, rot(arch.axis(l), th(l, q))) * s;
    if (n == 2) s = cnot(2, 0, 1) * s;
    if (n >= 3)
      for (int q = 0; q < n; ++q) s = cnot(n, q, (q + 1) % n) * s;
  }
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  const auto ro = arch.readout_qubits();
  double acc = 0;
  for (std::size_t j = 0; j < ro.size(); ++j) {
    acc += w[j] * (s.adjoint() * gate_on(n, ro[j], z) * s)(0).real();
  }
  return acc;
}

Outcome parameter_shift() {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), wd(-1, 1);
  const double h = 1e-5;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    qsim::PqcArchitecture arch;
    arch.qubit_count = 1 + static_cast<int>(rng() % 4);
    arch.depth = 1 + static_cast<int>(rng() % 3);
    for (int l = 0; l < arch.depth; ++l) arch.layer_axes.push_back(static_cast<qsim::Axis>(rng() % 3));
    if (rng() % 2) {
      for (int q = 0; q < arch.qubit_count; ++q)
        if (rng() % 2 || arch.readout.empty()) arch.readout.push_back(q);
    }
    std::vector<double> x(arch.qubit_count), w(arch.readout_qubits().size());
    for (auto& v : x) v = ang(rng);
    for (auto& v : w) v = wd(rng);
    qsim::PqcParams<double> th(arch.depth, arch.qubit_count);
    for (Eigen::Index i = 0; i < th.size(); ++i) th.data()[i] = ang(rng);

    const auto g = qsim::param_shift_grad<double>(x, arch, th, w);
    for (Eigen::Index i = 0; i < th.size(); ++i) {
      auto p = th, m = th;
      p.data()[i] += h;
      m.data()[i] -= h;
      const double fd = (oracle_readout(x, arch, p, w) - oracle_readout(x, arch, m, w)) / (2 * h);
      worst = std::max(worst, std::abs(g.data()[i] - fd));
    }
  }
  // One qubit, one RX layer, embedding 0: <Z> = cos(theta), gradient -sin(theta).
  double closed = 0;
  qsim::PqcArchitecture one;
  for (double theta : {-2.5, -1.0, 0.0, 0.3, 1.2, 3.0}) {
    qsim::PqcParams<double> th(1, 1);
    th(0, 0) = theta;
    const std::vector<double> x{0.0}, w{1.0};
    closed = std::max(closed, std::abs(qsim::param_shift_grad<double>(x, one, th, w)(0, 0) + std::sin(theta)));
  }
  return {worst <= 1e-6 && closed <= 1e-12,
          "100 circuits, max |shift - fd| " + fmt(worst) + " (tol 1e-6); 1-qubit RX vs -sin " + fmt(closed)};
}

// --- 5 ---------------------------------------------------------------------

Outcome model_gradients() {
  std::mt19937_64 rng(5);
  const double h = 1e-5;
  double worst_norm = 0, worst_comp = 0;
  for (int t = 0; t < 20; ++t) {
    const auto shape = random_shape(rng, 5, 4, 3);
    const auto m = model::initialize_model(shape, rng());
    const int batch = 1 + static_cast<int>(rng() % 6);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(batch, shape.feature_count) * 2.0;
    std::vector<int> y(batch);
    for (auto& v : y) v = static_cast<int>(rng() % shape.class_count);

    const auto g = model::flatten_weights(model::loss_and_grads(m, x, y).grads);
    const auto w = model::flatten_weights(m);
    std::vector<double> fd(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto p = w, q = w;
      p[i] += h;
      q[i] -= h;
      const double lp = model::cross_entropy(model::forward(model::unflatten_weights(m, p), x).logits, y);
      const double lq = model::cross_entropy(model::forward(model::unflatten_weights(m, q), x).logits, y);
      fd[i] = (lp - lq) / (2 * h);
    }
    const Eigen::Map<const Eigen::VectorXd> ga(g.data(), g.size()), fa(fd.data(), fd.size());
    worst_norm = std::max(worst_norm, (ga - fa).norm() / std::max(fa.norm(), 1e-12));
    for (std::size_t i = 0; i < w.size(); ++i) {
      worst_comp = std::max(worst_comp, std::abs(g[i] - fd[i]) / (std::abs(fd[i]) + 1e-6));
    }
  }
  return {worst_norm <= 1e-4 && worst_comp <= 1e-4,
          "20 models, max relative error " + fmt(worst_norm) + " (vector), " + fmt(worst_comp) +
              " (per parameter, floor 1e-6); tol 1e-4"};
}

// --- 6 and 10 share one compare run ---------------------------------------

cli::CompareReport g_compare;
bool g_compare_ok = false;
double g_compare_s = 0;

Outcome table_analog() {
  cli::RunConfig c;  // defaults are the desk-scale configuration
  c.output.report = (g_work / "compare.json").string();
  const auto prepared = cli::prepare_data(c);
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream table;
  g_compare = cli::cmd_compare(c, table);
  g_compare_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  g_compare_ok = true;
  std::istringstream lines(table.str());
  for (std::string l; std::getline(lines, l);) std::cout << "      " << l << "\n";

  const auto& fhe_arm = g_compare.arms[0];
  const auto& plain = g_compare.arms[1];
  const bool split_ok = prepared.split.train.size() == 1200 && prepared.split.test.size() == 300 &&
                        prepared.clients.size() == 4;
  const bool a = plain.test_acc >= 0.90;
  const bool b = g_compare.test_acc_gap_pp <= 2.0;
  const bool cc = g_compare.max_round_weight_diff <= 1e-3;
  return {split_ok && a && b && cc,
          "split " + std::to_string(prepared.split.train.size()) + "/" +
              std::to_string(prepared.split.test.size()) + "; (a) plaintext test acc " +
              fmt(plain.test_acc) + " >= 0.9; (b) gap " + fmt(g_compare.test_acc_gap_pp) +
              " pp <= 2 (fhe " + fmt(fhe_arm.test_acc) + "); (c) max round weight diff " +
              fmt(g_compare.max_round_weight_diff) + " <= 1e-3"};
}

Outcome overhead_direction() {
  if (!g_compare_ok) return {false, "compare run unavailable"};
  const auto report = nlohmann::json::parse(std::ifstream(g_work / "compare.json"));
  const double fhe_ms = report["arms"][0]["wall_ms"].get<double>();
  const double plain_ms = report["arms"][1]["wall_ms"].get<double>();
  return {report["arms"][0]["mode"] == "fhe" && fhe_ms >= plain_ms,
          "report wall time fhe " + fmt(fhe_ms / 1000) + " s >= plaintext " + fmt(plain_ms / 1000) +
              " s (ratio " + fmt(fhe_ms / plain_ms) + ")"};
}

// --- 7 ---------------------------------------------------------------------

Outcome single_client() {
  const auto params = fhe::EncryptionParams::defaults();
  const auto keys = fhe::keygen(params, {}, 707);
  const auto split = data::generate_synthetic("blobs", 400, 0.25, 7);
  const auto initial = model::initialize_model(cli::model_shape(cli::RunConfig{}, split.train), 7);

  federation::FederationSetup s;
  s.config.client_count = 1;
  s.config.rounds = 5;
  s.config.training.epochs_per_round = 2;
  s.config.training.batch_size = 16;
  s.config.seed = 70;
  s.client_data = {split.train};
  s.test = split.test;
  s.mode = federation::Mode::kFhe;
  s.keys = &keys;
  const auto run = federation::run_federated_training(s, initial);

  // Per round: standalone training from the same starting weights.
  // Continuous: standalone training that never sees quantization.
  double per_round = 0, continuous = 0;
  model::HybridModel prev = initial, alone = initial;
  for (int r = 1; r <= s.config.rounds; ++r) {
    const auto cfg = federation::client_training_config(s.config, r, 0);
    const auto local = model::train_local(prev, split.train, cfg).model;
    alone = model::train_local(alone, split.train, cfg).model;
    const auto& global = run.round_models[r - 1];
    per_round = std::max(per_round, max_abs_diff(model::flatten_weights(global), model::flatten_weights(local)));
    continuous = std::max(continuous, max_abs_diff(model::flatten_weights(global), model::flatten_weights(alone)));
    prev = global;
  }
  const double tol = std::ldexp(1.0, -15);
  return {run.rounds_run == 5 && per_round <= tol && continuous <= tol,
          "5 rounds, max per-round weight diff " + fmt(per_round) + " (tol " + fmt(tol) +
              "); uninterrupted standalone max diff " + fmt(continuous)};
}

// --- 8 ---------------------------------------------------------------------

Outcome protocol_determinism() {
  cli::RunConfig c;
  c.mode = federation::Mode::kFhe;
  c.data.samples = 600;
  c.federation.rounds = 3;
  c.federation.epochs_per_round = 1;
  c.federation.runner = cli::Runner::kSocket;
  c.output.wall_time = false;
  const auto key_dir = g_work / "socket-keys";
  c.encryption.key_dir = key_dir.string();
  std::ostringstream sink;
  cli::cmd_keygen(c, key_dir, sink);
  std::string files[2];
  for (int i = 0; i < 2; ++i) {
    c.output.metrics = (g_work / ("socket-" + std::to_string(i) + ".jsonl")).string();
    c.output.checkpoint = (g_work / ("socket-" + std::to_string(i) + ".qck")).string();
    cli::cmd_train(c, sink);
    std::ifstream in(c.output.metrics, std::ios::binary);
    files[i].assign(std::istreambuf_iterator<char>(in), {});
  }
  const bool identical = !files[0].empty() && files[0] == files[1];

  // Flip each byte of the length prefix in turn.
  const auto keys = fhe::load_key_material(key_dir);
  auto prepared = cli::prepare_data(c);
  federation::FederationSetup s;
  s.config = cli::round_config(c, prepared.clients);
  s.client_data = prepared.clients;
  s.test = prepared.split.test;
  s.keys = &keys;
  const auto initial = model::initialize_model(cli::model_shape(c, prepared.split.train), 0);
  int aborted = 0;
  std::string sample;
  for (std::size_t off = 0; off < 4; ++off) {
    federation::NetworkOptions opt;
    opt.transport = federation::TransportKind::kSocket;
    opt.receive_timeout = federation::Millis(2000);
    opt.fault = {1, 2, off, static_cast<std::uint8_t>(off == 0 ? 0x01 : 0x80)};
    try {
      federation::run_networked_training(s, initial, opt);
    } catch (const ProtocolError& e) {
      if (std::string(e.what()).find("round 2") != std::string::npos) ++aborted;
      sample = e.what();
    }
  }
  return {identical && aborted == 4,
          std::string(identical ? "two socket runs byte-identical (" : "socket runs differ (") +
              std::to_string(files[0].size()) + " bytes); " + std::to_string(aborted) +
              "/4 length-byte flips aborted round 2 (\"" + sample.substr(0, 60) + "\")"};
}

// --- 9 ---------------------------------------------------------------------

static_assert(std::is_same_v<decltype(std::declval<const federation::AggregationServer&>().public_material()),
                             const fhe::PublicKeyMaterial*>);
static_assert(!std::is_base_of_v<fhe::KeyMaterial, fhe::PublicKeyMaterial>);
static_assert(!std::is_convertible_v<const fhe::PublicKeyMaterial&, const fhe::KeyMaterial&>);

bool binary_contains(const fs::path& p, const std::string& needle) {
  std::ifstream in(p, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), {});
  return bytes.find(needle) != std::string::npos;
}

int shell(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

Outcome server_blindness() {
  const fs::path dir = g_work / "blind";
  const std::string fixture = QFL_BLINDNESS_FIXTURE, aggregator = QFL_BLIND_AGGREGATE;
  const int setup = shell("'" + fixture + "' setup '" + dir.string() + "'");
  const bool no_secret = fs::exists(dir / "server" / "public.key") && !fs::exists(dir / "server" / "secret.key");
  std::string cmd = "'" + aggregator + "' --keys '" + (dir / "server").string() + "' --round 1 --out '" +
                    (dir / "global.bin").string() + "'";
  for (int k = 0; k < 3; ++k) cmd += " '" + (dir / ("update-" + std::to_string(k) + ".bin")).string() + "'";
  const int agg = shell(cmd);
  const int check = shell("'" + fixture + "' check '" + dir.string() + "'");

  // Mangled prefix of qfl::fhe::decrypt(...).
  const std::string symbol = "_ZN3qfl3fhe7decrypt";
  const bool absent = !binary_contains(aggregator, symbol);
  const bool control = binary_contains(fixture, symbol);
  return {setup == 0 && no_secret && agg == 0 && check == 0 && absent && control,
          std::string("aggregator ran on public keys only: ") + (agg == 0 && check == 0 ? "yes" : "no") +
              "; server dir without secret.key: " + (no_secret ? "yes" : "no") +
              "; decrypt symbol in aggregator: " + (absent ? "absent" : "PRESENT") +
              " (client control: " + (control ? "present" : "missing") + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string work = QFL_ACCEPTANCE_WORK_DIR;
  std::vector<int> only;
  app.add_option("--work", work, "Scratch directory");
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);
  g_work = work;
  fs::remove_all(g_work);
  fs::create_directories(g_work);
  cli::set_log_level("warn");

  const std::vector<Criterion> all{
      {1, "fhe-roundtrip-precision", 60, fhe_roundtrip},
      {2, "encrypted-aggregation-oracle", 120, aggregation_oracle},
      {3, "ntt-vs-schoolbook", 10, ntt_vs_schoolbook},
      {4, "parameter-shift-exactness", 60, parameter_shift},
      {5, "hybrid-model-gradient-check", 120, model_gradients},
      {6, "desk-scale-comparison", 600, table_analog},
      {7, "single-client-degeneracy", 120, single_client},
      {8, "protocol-determinism-and-framing", 120, protocol_determinism},
      {9, "server-blindness", 120, server_blindness},
      {10, "overhead-direction", 600, overhead_direction},
  };
  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    if (c.id == 10 && !g_compare_ok) table_analog();
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.id == 10) secs = g_compare_s;
    const bool in_budget = secs <= c.budget_s;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("%s %2d %-34s %s [%.1f s / %.0f s budget%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_budget ? "" : ", OVER");
    std::fflush(stdout);
  }
  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
