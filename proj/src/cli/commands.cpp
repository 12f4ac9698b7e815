// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/cli/commands.hpp"

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <ostream>

#include "qfl/errors.hpp"
#include "qfl/federation/checkpoint.hpp"
#include "qfl/federation/vector_format.hpp"
#include "qfl/fhe/public_files.hpp"
#include "qfl/fhe/serialization.hpp"
#include "qfl/federation/runner.hpp"
#include "qfl/fhe/key_files.hpp"

namespace qfl::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const IngestionError*>(&e)) return kExitIo;
  return kExitRuntime;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string prime_bits_summary(const fhe::EncryptionParams& p) {
  std::string s;
  for (auto q : p.modulus_chain) {
    if (!s.empty()) s += ",";
    s += std::to_string(std::bit_width(q));
  }
  return s;
}

void print_params(const fhe::EncryptionParams& p, std::ostream& out) {
  out << "  ring degree    " << p.ring_degree << " (" << p.slot_count() << " slots)\n"
      << "  modulus chain  " << p.modulus_chain.size() << " primes, bits {" << prime_bits_summary(p)
      << "}\n"
      << "  special prime  " << std::bit_width(p.special_prime) << " bits\n"
      << "  scale          2^" << std::log2(p.scale) << "\n"
      << "  digest         " << std::hex << std::setw(16) << std::setfill('0') << p.digest()
      << std::dec << std::setfill(' ') << "\n";
}

struct Experiment {
  PreparedData data;
  model::HybridModel initial;
  federation::FederationSetup setup;
};

Experiment build_experiment(const RunConfig& c, federation::Mode mode) {
  Experiment e;
  e.data = prepare_data(c);
  const auto shape = model_shape(c, e.data.split.train);
  e.initial = model::initialize_model(shape, c.model.init_seed);
  auto& s = e.setup;
  s.config = round_config(c, e.data.clients);
  s.client_data = e.data.clients;
  s.test = e.data.split.test;
  s.mode = mode;
  s.quantization = c.federation.quantization;
  s.record_wall_time = c.output.wall_time;
  return e;
}

federation::TrainingRun execute(const RunConfig& c, const federation::FederationSetup& s,
                                const model::HybridModel& initial,
                                const federation::RecordCallback& on_record) {
  if (c.federation.runner == Runner::kInProcess) {
    return federation::run_federated_training(s, initial, on_record);
  }
  federation::NetworkOptions opt;
  opt.transport = c.federation.runner == Runner::kSocket ? federation::TransportKind::kSocket
                                                         : federation::TransportKind::kLoopback;
  opt.receive_timeout = federation::Millis(c.federation.receive_timeout_ms);
  return federation::run_networked_training(s, initial, opt, on_record);
}

ArmSummary summarize(federation::Mode mode, const federation::TrainingRun& run,
                     const PreparedData& data, double wall_ms) {
  ArmSummary a;
  a.mode = mode;
  const auto train = model::evaluate(run.final_model, data.split.train);
  a.train_loss = train.mean_loss;
  a.train_acc = train.accuracy;
  if (data.split.test.size() > 0) {
    const auto test = model::evaluate(run.final_model, data.split.test);
    a.test_loss = test.mean_loss;
    a.test_acc = test.accuracy;
  }
  a.wall_ms = wall_ms;
  a.rounds_run = run.rounds_run;
  a.metrics_rows = run.history.size();
  return a;
}

void log_record(const federation::MetricsRecord& r) {
  if (r.actor != federation::kGlobalActor) return;
  spdlog::info("round {}: train_loss {:.4f} train_acc {:.4f} test_loss {:.4f} test_acc {:.4f}",
               r.round, r.train_loss.value_or(NAN), r.train_acc.value_or(NAN),
               r.test_loss.value_or(NAN), r.test_acc.value_or(NAN));
}

}  // namespace

KeygenResult cmd_keygen(const RunConfig& c, const std::filesystem::path& out_dir, std::ostream& out) {
  c.validate();
  const auto params = c.encryption.params();
  const std::set<std::size_t> steps(c.encryption.rotation_steps.begin(), c.encryption.rotation_steps.end());
  const auto keys = fhe::keygen(params, steps, c.encryption.keygen_seed);
  fhe::write_key_files(keys, out_dir);
  KeygenResult r;
  r.dir = out_dir;
  for (const char* f : {fhe::kParamsFile, fhe::kSecretKeyFile, fhe::kPublicKeyFile, fhe::kGaloisKeyFile}) {
    r.files.push_back(out_dir / f);
  }
  out << "generated CKKS keys in " << out_dir.string() << "\n";
  print_params(params, out);
  out << "  galois steps   ";
  for (auto s : steps) out << s << " ";
  out << "\n";
  for (const auto& f : r.files) {
    out << "  " << std::left << std::setw(13) << f.filename().string() << std::right << "  "
        << std::filesystem::file_size(f) << " bytes\n";
  }
  return r;
}

ArmSummary cmd_train(const RunConfig& c, std::ostream& out) {
  c.validate();
  auto e = build_experiment(c, c.mode);
  std::optional<fhe::KeyMaterial> keys;
  if (c.mode == federation::Mode::kFhe) {
    const auto params = c.encryption.params();
    const std::filesystem::path dir = c.encryption.key_dir;
    if (!std::filesystem::exists(dir / fhe::kSecretKeyFile)) {
      throw IoError("no key material in " + dir.string() + " (run keygen first)");
    }
    keys = fhe::load_key_material(params, dir);
    e.setup.keys = &*keys;
  }
  e.setup.validate(e.initial);

  if (!c.output.data_csv.empty()) data::write_csv(e.data.split.train, c.output.data_csv);
  federation::MetricsSink sink(c.output.metrics);
  const auto t0 = Clock::now();
  const auto run = execute(c, e.setup, e.initial, [&](const federation::MetricsRecord& r) {
    sink.write(r);
    log_record(r);
  });
  const double wall = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  federation::save_checkpoint(run.final_model, c.output.checkpoint);
  const auto a = summarize(c.mode, run, e.data, wall);
  out << std::fixed << std::setprecision(4) << "mode " << federation::to_string(c.mode) << ", "
      << a.rounds_run << " round(s), " << c.federation.clients << " client(s)\n"
      << "  train accuracy " << a.train_acc << "  loss " << a.train_loss << "\n"
      << "  test accuracy  " << a.test_acc << "  loss " << a.test_loss << "\n"
      << "  wall time      " << std::setprecision(2) << a.wall_ms / 1000.0 << " s ("
      << a.wall_ms / 60000.0 << " min)\n"
      << "  metrics        " << c.output.metrics << " (" << a.metrics_rows << " rows)\n"
      << "  checkpoint     " << c.output.checkpoint << "\n";
  out.unsetf(std::ios::floatfield);
  return a;
}

CompareReport cmd_compare(const RunConfig& c, std::ostream& out, std::vector<federation::Mode> arms) {
  c.validate();
  if (arms.size() != 2) throw ConfigError("compare needs exactly two arms");
  CompareReport report;
  std::vector<std::vector<model::HybridModel>> round_models;
  for (auto mode : arms) {
    auto e = build_experiment(c, mode);
    const auto t0 = Clock::now();
    std::optional<fhe::KeyMaterial> keys;
    if (mode == federation::Mode::kFhe) {
      const auto params = c.encryption.params();
      const std::set<std::size_t> steps(c.encryption.rotation_steps.begin(),
                                        c.encryption.rotation_steps.end());
      keys = fhe::keygen(params, steps, c.encryption.keygen_seed);
      e.setup.keys = &*keys;
    }
    const auto run = execute(c, e.setup, e.initial, log_record);
    const double wall = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    report.arms.push_back(summarize(mode, run, e.data, wall));
    round_models.push_back(run.round_models);
  }
  report.test_acc_gap_pp = 100.0 * std::abs(report.arms[0].test_acc - report.arms[1].test_acc);
  const std::size_t rounds = std::min(round_models[0].size(), round_models[1].size());
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto a = model::flatten_weights(round_models[0][r]);
    const auto b = model::flatten_weights(round_models[1][r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      report.max_round_weight_diff = std::max(report.max_round_weight_diff, std::abs(a[i] - b[i]));
    }
  }

  out << std::left << std::setw(11) << "arm" << std::right << std::setw(11) << "train_loss"
      << std::setw(11) << "train_acc" << std::setw(11) << "test_loss" << std::setw(11) << "test_acc"
      << std::setw(12) << "time_min" << std::setw(8) << "rounds" << "\n";
  for (const auto& a : report.arms) {
    out << std::left << std::setw(11) << federation::to_string(a.mode) << std::right << std::fixed
        << std::setprecision(4) << std::setw(11) << a.train_loss << std::setw(11) << a.train_acc
        << std::setw(11) << a.test_loss << std::setw(11) << a.test_acc << std::setw(12)
        << a.wall_ms / 60000.0 << std::setw(8) << a.rounds_run << "\n";
  }
  out << "test accuracy gap      " << std::setprecision(2) << report.test_acc_gap_pp << " pp\n"
      << "max round weight diff  " << std::scientific << std::setprecision(3)
      << report.max_round_weight_diff << "\n";
  out.unsetf(std::ios::floatfield);
  if (!c.output.report.empty()) {
    const auto text = report_to_json(report);
    fhe::write_file(c.output.report,
                    std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  return report;
}

std::string report_to_json(const CompareReport& report) {
  nlohmann::ordered_json j;
  j["arms"] = nlohmann::ordered_json::array();
  for (const auto& a : report.arms) {
    j["arms"].push_back({{"mode", federation::to_string(a.mode)},
                         {"train_loss", a.train_loss},
                         {"train_acc", a.train_acc},
                         {"test_loss", a.test_loss},
                         {"test_acc", a.test_acc},
                         {"wall_ms", a.wall_ms},
                         {"rounds", a.rounds_run}});
  }
  j["test_acc_gap_pp"] = report.test_acc_gap_pp;
  j["max_round_weight_diff"] = report.max_round_weight_diff;
  return j.dump(2) + "\n";
}

}  // namespace qfl::cli

namespace qfl::cli {
namespace {

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

void describe_records(std::span<const std::uint8_t> bytes, std::ostream& out) {
  ByteReader in(bytes);
  std::size_t index = 0;
  while (!in.done()) {
    const auto rec = fhe::read_record(in);
    out << "record " << index++ << ": " << fhe::to_string(rec.kind) << "\n"
        << "  params digest " << hex64(rec.params_digest) << "\n"
        << "  ring degree   " << rec.ring_degree << "\n"
        << "  level         " << static_cast<int>(rec.level) << "\n";
    if (rec.kind == fhe::ObjectKind::kCiphertext) out << "  scale         2^" << std::log2(rec.scale) << "\n";
    if (rec.kind == fhe::ObjectKind::kGaloisKey) out << "  rotation step " << rec.aux << "\n";
    out << "  polynomials   " << rec.polys.size();
    if (!rec.polys.empty()) out << " x " << rec.polys.front().prime_count() << " residue rows";
    out << "\n";
    if (rec.kind == fhe::ObjectKind::kSecretKey) {
      out << "  coefficients redacted\n";
    } else if (!rec.polys.empty() && rec.polys.front().prime_count() > 0) {
      const auto row = rec.polys.front().residues(0);
      out << "  first residues";
      for (std::size_t i = 0; i < std::min<std::size_t>(4, row.size()); ++i) out << " " << row[i];
      out << " ...\n";
    }
  }
}

void describe_checkpoint(std::span<const std::uint8_t> bytes, std::ostream& out) {
  const auto m = federation::deserialize_checkpoint(bytes);
  const auto& s = m.shape;
  out << "model checkpoint\n"
      << "  features   " << s.feature_count << "\n"
      << "  classes    " << s.class_count << "\n"
      << "  qubits     " << s.pqc.qubit_count << "\n"
      << "  depth      " << s.pqc.depth << "\n"
      << "  readout    " << s.readout_count() << " qubit(s)\n"
      << "  parameters " << m.parameter_count() << "\n";
}

void describe_vector(std::span<const std::uint8_t> bytes, std::ostream& out) {
  const auto v = federation::deserialize_vector(bytes);
  out << "plain vector, " << v.size() << " value(s)\n";
  if (v.empty()) return;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  out << "  min " << *lo << "  max " << *hi << "\n  head";
  for (std::size_t i = 0; i < std::min<std::size_t>(8, v.size()); ++i) out << " " << v[i];
  out << "\n";
}

}  // namespace

void cmd_inspect(const std::filesystem::path& path, std::ostream& out) {
  const auto bytes = fhe::read_file(path);
  const std::string_view head(reinterpret_cast<const char*>(bytes.data()),
                              std::min<std::size_t>(4, bytes.size()));
  out << path.string() << " (" << bytes.size() << " bytes)\n";
  if (head == std::string_view(fhe::kRecordMagic, 4)) {
    describe_records(bytes, out);
  } else if (head == "PVF1") {
    describe_vector(bytes, out);
  } else if (head == "QCK1") {
    describe_checkpoint(bytes, out);
  } else if (!head.empty() && head.front() == '{') {
    const auto p = fhe::params_from_json(
        std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    out << "encryption parameters\n";
    print_params(p, out);
  } else {
    throw FormatError("unrecognized file format: " + path.string());
  }
}

namespace {

std::string read_text(const std::filesystem::path& p) {
  const auto b = fhe::read_file(p);
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

federation::Mode parse_mode(const std::string& s) {
  if (s == "fhe") return federation::Mode::kFhe;
  if (s == "plaintext") return federation::Mode::kPlaintext;
  throw ConfigError("unknown mode '" + s + "' (expected fhe or plaintext)");
}

}  // namespace

void set_log_level(std::string_view level) {
  spdlog::set_level(spdlog::level::from_str(std::string(level)));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const char* lvl = std::getenv("QFL_LOG_LEVEL");
  set_log_level(lvl ? lvl : "info");
  CLI::App app{"Federated hybrid quantum-classical training with encrypted aggregation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON run configuration");
    sub->add_option("--set", sets, "Override a config field, e.g. federation.rounds=5");
  };
  std::optional<std::string> mode, metrics, checkpoint, key_dir, report;
  std::optional<int> rounds;
  std::optional<std::uint64_t> seed;

  auto* keygen = app.add_subcommand("keygen", "Generate CKKS key material");
  add_common(keygen);
  keygen->add_option("-o,--out", key_dir, "Output directory (default: encryption.key_dir)");

  auto* train = app.add_subcommand("train", "Run federated training");
  add_common(train);
  train->add_option("--mode", mode, "fhe or plaintext");
  train->add_option("--rounds", rounds, "Communication rounds");
  train->add_option("--seed", seed, "Master seed");
  train->add_option("--metrics", metrics, "Metrics JSONL output");
  train->add_option("--checkpoint", checkpoint, "Model checkpoint output");
  train->add_option("--key-dir", key_dir, "Directory holding key material");

  std::string arms_text = "fhe,plaintext";
  auto* compare = app.add_subcommand("compare", "Run encrypted and plaintext arms side by side");
  add_common(compare);
  compare->add_option("--arms", arms_text, "Two comma-separated modes");
  compare->add_option("--rounds", rounds, "Communication rounds");
  compare->add_option("--seed", seed, "Master seed");
  compare->add_option("--report", report, "JSON report output");

  std::string inspect_path;
  auto* inspect = app.add_subcommand("inspect", "Describe a key, ciphertext or checkpoint file");
  inspect->add_option("file", inspect_path, "File to inspect")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (inspect->parsed()) {
      cmd_inspect(inspect_path, out);
      return kExitOk;
    }
    std::string text = config_path.empty() ? "{}" : read_text(config_path);
    for (const auto& s : sets) apply_override(text, s);
    auto config = parse_config(text);
    if (mode) config.mode = parse_mode(*mode);
    if (rounds) config.federation.rounds = *rounds;
    if (seed) config.seed = *seed;
    if (metrics) config.output.metrics = *metrics;
    if (checkpoint) config.output.checkpoint = *checkpoint;
    if (report) config.output.report = *report;
    if (key_dir && !keygen->parsed()) config.encryption.key_dir = *key_dir;
    config.validate();

    if (keygen->parsed()) {
      cmd_keygen(config, key_dir ? *key_dir : config.encryption.key_dir, out);
    } else if (train->parsed()) {
      cmd_train(config, out);
    } else {
      std::vector<federation::Mode> arms;
      std::stringstream ss(arms_text);
      for (std::string item; std::getline(ss, item, ',');) arms.push_back(parse_mode(item));
      cmd_compare(config, out, arms);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace qfl::cli
