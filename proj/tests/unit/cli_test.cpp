// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <iomanip>
#include <json.hpp>
#include <set>
#include <fstream>
#include <sstream>

#include "qfl/cli/commands.hpp"
#include "qfl/cli/config.hpp"
#include "qfl/errors.hpp"
#include "qfl/federation/checkpoint.hpp"
#include "qfl/federation/metrics.hpp"
#include "qfl/fhe/key_files.hpp"
#include "qfl/fhe/serialization.hpp"

namespace qfl::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("qfl_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

RunConfig small_config(const TempDir& dir) {
  RunConfig c;
  c.data.samples = 200;
  c.federation.clients = 2;
  c.federation.rounds = 2;
  c.federation.epochs_per_round = 1;
  c.encryption.key_dir = dir / "keys";
  c.output.metrics = dir / "metrics.jsonl";
  c.output.checkpoint = dir / "model.qck";
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(std::vector<std::string> args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  args.insert(args.begin(), "qfl");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

TEST(Config, DefaultsAreValid) {
  const RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.encryption.params().ring_degree, 4096u);
  EXPECT_EQ(c.encryption.params().modulus_chain.size(), 3u);
}

TEST(Config, ParsesNestedSections) {
  const auto c = parse_config(R"({
    "mode": "plaintext", "seed": 9,
    "federation": {"clients": 3, "rounds": 4, "loss_delta": 0.001, "transport": "socket",
                   "quantization": {"fractional_bits": 12}},
    "model": {"qubits": 4, "depth": 3, "layer_axes": ["x", "y", "z"]},
    "data": {"kind": "two_moons", "partition": {"strategy": "dirichlet", "alpha": 0.5}},
    "output": {"wall_time": false}
  })");
  EXPECT_EQ(c.mode, federation::Mode::kPlaintext);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.federation.clients, 3);
  EXPECT_EQ(c.federation.rounds, 4);
  ASSERT_TRUE(c.federation.loss_delta.has_value());
  EXPECT_DOUBLE_EQ(*c.federation.loss_delta, 0.001);
  EXPECT_EQ(c.federation.runner, Runner::kSocket);
  EXPECT_EQ(c.federation.quantization.fractional_bits, 12);
  EXPECT_EQ(c.model.qubits, 4);
  ASSERT_EQ(c.model.layer_axes.size(), 3u);
  EXPECT_EQ(c.model.layer_axes[1], qsim::Axis::kY);
  EXPECT_EQ(c.data.kind, "two_moons");
  EXPECT_EQ(c.data.strategy, data::PartitionStrategy::kDirichlet);
  EXPECT_DOUBLE_EQ(c.data.alpha, 0.5);
  EXPECT_FALSE(c.output.wall_time);
}

TEST(Config, ShippedConfigMatchesDefaults) {
  const auto c = load_config(fs::path(QFL_CONFIG_DIR) / "desk_blobs.json");
  RunConfig d;
  d.model.layer_axes = {qsim::Axis::kX, qsim::Axis::kX};
  d.output.report = "compare.json";
  EXPECT_EQ(to_json(c), to_json(d));
  EXPECT_THROW(load_config(fs::path(QFL_CONFIG_DIR) / "missing.json"), IoError);
}

TEST(Config, ToJsonRoundTrips) {
  RunConfig c;
  c.seed = 77;
  c.federation.loss_delta = 0.25;
  c.model.readout = {0, 2};
  c.data.strategy = data::PartitionStrategy::kDirichlet;
  const auto back = parse_config(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.model.readout, c.model.readout);
}

TEST(Config, RejectsUnknownKeysAndWrongTypes) {
  EXPECT_THROW(parse_config(R"({"federation": {"clinets": 3}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"extra": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"federation": {"rounds": "ten"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"mode": "quantum"})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(Config, ValidateRejectsOutOfRangeValues) {
  const auto bad = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(bad([](RunConfig& c) { c.federation.rounds = -1; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.federation.clients = 0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.federation.learning_rate = -0.1; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.federation.batch_size = 0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.encryption.ring_degree = 1000; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.encryption.prime_bits = {}; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.data.test_fraction = 1.5; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.model.qubits = 0; }).validate(), ConfigError);
  EXPECT_THROW(bad([](RunConfig& c) { c.federation.quantization.fractional_bits = 0; }).validate(),
               ConfigError);
}

TEST(Config, OverridesPatchNestedFields) {
  std::string text = "{}";
  apply_override(text, "federation.rounds=5");
  apply_override(text, "data.kind=xor");
  apply_override(text, "federation.loss_delta=1e-3");
  apply_override(text, "data.partition.strategy=dirichlet");
  const auto c = parse_config(text);
  EXPECT_EQ(c.federation.rounds, 5);
  EXPECT_EQ(c.data.kind, "xor");
  EXPECT_DOUBLE_EQ(c.federation.loss_delta.value(), 1e-3);
  EXPECT_EQ(c.data.strategy, data::PartitionStrategy::kDirichlet);
  EXPECT_THROW(apply_override(text, "no-equals-sign"), ConfigError);
  EXPECT_THROW(apply_override(text, "=3"), ConfigError);
  EXPECT_THROW(parse_config(R"({\"data\": {\"kind\": \"spirals\"}})"), ConfigError);
}

TEST(Keygen, WritesAllFilesDeterministically) {
  TempDir dir;
  RunConfig c;
  std::ostringstream out;
  const auto a = cmd_keygen(c, dir / "a", out);
  cmd_keygen(c, dir / "b", out);
  ASSERT_EQ(a.files.size(), 4u);
  for (const auto& f : a.files) {
    ASSERT_TRUE(fs::exists(f)) << f;
    EXPECT_EQ(slurp(f), slurp(dir.path() / "b" / f.filename())) << f.filename();
  }
  c.encryption.keygen_seed = 2;
  cmd_keygen(c, dir / "c", out);
  EXPECT_NE(slurp(dir.path() / "a" / fhe::kSecretKeyFile),
            slurp(dir.path() / "c" / fhe::kSecretKeyFile));
  EXPECT_NE(out.str().find("4096"), std::string::npos);
}

TEST(Keygen, UnwritableDirectoryNamesThePath) {
  TempDir dir;
  std::ofstream(dir / "blocker") << "x";
  std::ostringstream out;
  try {
    cmd_keygen(RunConfig{}, dir.path() / "blocker" / "keys", out);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("blocker"), std::string::npos) << e.what();
  }
}

TEST(Train, ZeroRoundsCheckpointsTheInitialModel) {
  TempDir dir;
  auto c = small_config(dir);
  c.mode = federation::Mode::kPlaintext;
  c.federation.rounds = 0;
  std::ostringstream out;
  const auto a = cmd_train(c, out);
  EXPECT_EQ(a.rounds_run, 0);
  EXPECT_TRUE(federation::read_metrics_file(c.output.metrics).empty());
  const auto saved = federation::load_checkpoint(c.output.checkpoint);
  const auto prepared = prepare_data(c);
  EXPECT_EQ(saved, model::initialize_model(model_shape(c, prepared.split.train), c.model.init_seed));
}

TEST(Train, FheRunWritesOneRowPerClientPlusGlobal) {
  TempDir dir;
  auto c = small_config(dir);
  c.federation.clients = 3;
  std::ostringstream out;
  cmd_keygen(c, c.encryption.key_dir, out);
  const auto a = cmd_train(c, out);
  const auto rows = federation::read_metrics_file(c.output.metrics);
  ASSERT_EQ(rows.size(), 2u * (3 + 1));
  EXPECT_EQ(a.metrics_rows, rows.size());
  for (int r = 0; r < 2; ++r) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(rows[r * 4 + k].round, r + 1);
      EXPECT_EQ(rows[r * 4 + k].actor, federation::client_actor(k));
      EXPECT_FALSE(rows[r * 4 + k].test_acc.has_value());
    }
    EXPECT_EQ(rows[r * 4 + 3].actor, federation::kGlobalActor);
    EXPECT_TRUE(rows[r * 4 + 3].test_acc.has_value());
  }
  EXPECT_GE(a.test_acc, 0.0);
  EXPECT_LE(a.test_acc, 1.0);
  EXPECT_NE(out.str().find("test accuracy"), std::string::npos);
}

TEST(Train, ModeIsTheOnlyDifferenceBetweenArms) {
  TempDir dir;
  auto c = small_config(dir);
  c.output.wall_time = false;
  std::ostringstream out;
  cmd_keygen(c, c.encryption.key_dir, out);
  cmd_train(c, out);
  const auto fhe_rows = federation::read_metrics_file(c.output.metrics);
  c.mode = federation::Mode::kPlaintext;
  cmd_train(c, out);
  const auto plain_rows = federation::read_metrics_file(c.output.metrics);
  ASSERT_EQ(fhe_rows.size(), plain_rows.size());
  for (std::size_t i = 0; i < fhe_rows.size(); ++i) {
    EXPECT_EQ(fhe_rows[i].actor, plain_rows[i].actor);
    EXPECT_NEAR(*fhe_rows[i].train_loss, *plain_rows[i].train_loss, 1e-3);
  }
}

TEST(Train, FheWithoutKeysIsAnIoError) {
  TempDir dir;
  const auto c = small_config(dir);
  std::ostringstream out;
  EXPECT_THROW(cmd_train(c, out), IoError);
  EXPECT_FALSE(fs::exists(c.output.metrics));
}

TEST(Train, NetworkedRunnerMatchesInProcess) {
  TempDir dir;
  auto c = small_config(dir);
  c.mode = federation::Mode::kPlaintext;
  c.output.wall_time = false;
  std::ostringstream out;
  cmd_train(c, out);
  const auto in_process = slurp(c.output.metrics);
  c.federation.runner = Runner::kSocket;
  cmd_train(c, out);
  EXPECT_EQ(slurp(c.output.metrics), in_process);
}

TEST(Compare, IdenticalArmsHaveZeroGap) {
  TempDir dir;
  auto c = small_config(dir);
  c.output.report = dir / "report.json";
  std::ostringstream out;
  const auto rep = cmd_compare(c, out, {federation::Mode::kPlaintext, federation::Mode::kPlaintext});
  ASSERT_EQ(rep.arms.size(), 2u);
  EXPECT_EQ(rep.test_acc_gap_pp, 0.0);
  EXPECT_EQ(rep.max_round_weight_diff, 0.0);
  EXPECT_NE(slurp(c.output.report).find("\"test_acc_gap_pp\": 0.0"), std::string::npos);
  EXPECT_THROW(cmd_compare(c, out, {federation::Mode::kFhe}), ConfigError);
}

TEST(Compare, ReportCarriesSixMetricsPerArm) {
  TempDir dir;
  auto c = small_config(dir);
  c.output.report = dir / "report.json";
  std::ostringstream out;
  cmd_compare(c, out, {federation::Mode::kPlaintext, federation::Mode::kPlaintext});
  const auto j = nlohmann::json::parse(slurp(c.output.report));
  ASSERT_EQ(j["arms"].size(), 2u);
  for (const auto& arm : j["arms"]) {
    std::set<std::string> keys;
    for (const auto& [k, v] : arm.items()) {
      if (k != "mode") keys.insert(k);
    }
    EXPECT_EQ(keys, (std::set<std::string>{"train_loss", "train_acc", "test_loss", "test_acc",
                                           "wall_ms", "rounds"}));
  }
}

TEST(Compare, EncryptedArmTracksPlaintext) {
  TempDir dir;
  const auto c = small_config(dir);
  std::ostringstream out;
  const auto rep = cmd_compare(c, out);
  EXPECT_EQ(rep.arms[0].mode, federation::Mode::kFhe);
  EXPECT_LE(rep.max_round_weight_diff, 1e-3);
  EXPECT_NE(out.str().find("train_loss"), std::string::npos);
}

TEST(Inspect, RedactsSecretKeyCoefficients) {
  TempDir dir;
  std::ostringstream out;
  cmd_keygen(RunConfig{}, dir.path(), out);
  std::ostringstream secret;
  cmd_inspect(dir.path() / fhe::kSecretKeyFile, secret);
  EXPECT_NE(secret.str().find("secret-key"), std::string::npos);
  EXPECT_NE(secret.str().find("redacted"), std::string::npos);
  EXPECT_EQ(secret.str().find("first residues"), std::string::npos);

  std::ostringstream galois;
  cmd_inspect(dir.path() / fhe::kGaloisKeyFile, galois);
  EXPECT_NE(galois.str().find("rotation step 1"), std::string::npos);

  std::ostringstream params;
  cmd_inspect(dir.path() / fhe::kParamsFile, params);
  EXPECT_NE(params.str().find("ring degree"), std::string::npos);
}

TEST(Inspect, ShowsPublicKeyDigestAndSize) {
  TempDir dir;
  std::ostringstream out;
  const RunConfig c;
  cmd_keygen(c, dir.path(), out);
  std::ostringstream desc;
  cmd_inspect(dir.path() / fhe::kPublicKeyFile, desc);
  std::ostringstream digest;
  digest << std::hex << std::setw(16) << std::setfill('0') << c.encryption.params().digest();
  EXPECT_NE(desc.str().find(digest.str()), std::string::npos) << desc.str();
  EXPECT_NE(desc.str().find(std::to_string(fs::file_size(dir.path() / fhe::kPublicKeyFile)) + " bytes"),
            std::string::npos);

  auto bytes = slurp(dir.path() / fhe::kPublicKeyFile);
  bytes[0] ^= 0x20;
  std::ofstream(dir / "bad.key", std::ios::binary) << bytes;
  EXPECT_THROW(cmd_inspect(dir / "bad.key", desc), FormatError);
}

TEST(Inspect, DescribesCheckpointsAndRejectsUnknownFiles) {
  TempDir dir;
  auto c = small_config(dir);
  c.mode = federation::Mode::kPlaintext;
  c.federation.rounds = 0;
  std::ostringstream out;
  cmd_train(c, out);
  std::ostringstream desc;
  cmd_inspect(c.output.checkpoint, desc);
  EXPECT_NE(desc.str().find("parameters 27"), std::string::npos) << desc.str();
  std::ofstream(dir / "junk.bin") << "JUNKJUNK";
  EXPECT_THROW(cmd_inspect(dir / "junk.bin", desc), FormatError);
}

TEST(RunCli, MapsErrorsToExitCodes) {
  TempDir dir;
  std::string out, err;
  EXPECT_EQ(run({}, &out, &err), kExitConfig);
  EXPECT_EQ(run({"train", "--no-such-flag"}), kExitConfig);
  EXPECT_EQ(run({"train", "--set", "federation.rounds=-3"}), kExitConfig);
  EXPECT_EQ(run({"train", "--mode", "quantum"}), kExitConfig);
  EXPECT_EQ(run({"train", "--config", dir / "missing.json"}), kExitIo);
  EXPECT_EQ(run({"inspect", dir / "missing.bin"}), kExitIo);
  std::ofstream(dir / "junk.bin") << "JUNK";
  EXPECT_EQ(run({"inspect", dir / "junk.bin"}, &out, &err), kExitRuntime);
  EXPECT_NE(err.find("unrecognized"), std::string::npos);
  EXPECT_EQ(run({"--help"}, &out), kExitOk);
  EXPECT_NE(out.find("keygen"), std::string::npos);
}

TEST(RunCli, KeygenThenTrainThroughFlags) {
  TempDir dir;
  std::string out, err;
  ASSERT_EQ(run({"keygen", "--out", dir / "k"}, &out, &err), kExitOk) << err;
  std::ofstream(dir / "run.json") << R"({"data": {"samples": 200}, "federation": {"clients": 2}})";
  ASSERT_EQ(run({"train", "-c", dir / "run.json", "--key-dir", dir / "k", "--rounds", "1",
                 "--metrics", dir / "m.jsonl", "--checkpoint", dir / "m.qck", "--set",
                 "federation.epochs_per_round=1"},
                &out, &err),
            kExitOk)
      << err;
  EXPECT_EQ(federation::read_metrics_file(dir / "m.jsonl").size(), 3u);
  EXPECT_TRUE(fs::exists(dir / "m.qck"));
}

}  // namespace
}  // namespace qfl::cli
