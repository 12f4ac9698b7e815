// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfl/data/dataset.hpp"
#include "qfl/data/partition.hpp"
#include "qfl/federation/quantization.hpp"
#include "qfl/federation/round_config.hpp"
#include "qfl/federation/transport.hpp"
#include "qfl/fhe/params.hpp"
#include "qfl/model/hybrid_model.hpp"

namespace qfl::cli {

struct EncryptionSection {
  std::size_t ring_degree = 4096;
  std::vector<int> prime_bits{60, 40, 40};
  int scale_bits = 40;
  std::vector<std::size_t> rotation_steps{1};
  std::string key_dir = "keys";
  std::uint64_t keygen_seed = 1;

  fhe::EncryptionParams params() const;
};

enum class Runner { kInProcess, kLoopback, kSocket };

struct FederationSection {
  int clients = 4;
  int rounds = 10;
  int epochs_per_round = 3;
  double learning_rate = 0.1;
  int batch_size = 32;
  std::optional<double> loss_delta;
  Runner runner = Runner::kInProcess;
  int receive_timeout_ms = 30000;
  federation::QuantizationSpec quantization;
};

struct ModelSection {
  int qubits = 3;
  int depth = 2;
  std::vector<qsim::Axis> layer_axes;
  std::vector<int> readout;
  std::uint64_t init_seed = 0;
};

struct DataSection {
  std::string source = "synthetic";  // or "csv"
  std::string kind = "blobs";
  std::size_t samples = 1500;
  double noise = 0.25;
  int classes = 0;
  int dims = 2;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string path;
  std::string label_column = "label";
  data::PartitionStrategy strategy = data::PartitionStrategy::kIid;
  double alpha = 1.0;
  std::uint64_t partition_seed = 0;
};

struct OutputSection {
  std::string metrics = "metrics.jsonl";
  std::string checkpoint = "model.qck";
  std::string report;    // compare: optional JSON report path
  std::string data_csv;  // optional export of the training split
  bool wall_time = true;
};

/// Whole experiment definition. Every section is checked by validate()
/// before any command touches the disk or starts computing.
struct RunConfig {
  federation::Mode mode = federation::Mode::kFhe;
  std::uint64_t seed = 0;
  EncryptionSection encryption;
  FederationSection federation;
  ModelSection model;
  DataSection data;
  OutputSection output;

  void validate() const;
};

/// Parses JSON text; unknown keys and wrong types throw ConfigError.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string to_json(const RunConfig& config);

/// `path.to.key=value`; the value is JSON when it parses, a string otherwise.
void apply_override(std::string& json_text, std::string_view assignment);

struct PreparedData {
  data::TrainTestSplit split;
  std::vector<data::Dataset> clients;
};

PreparedData prepare_data(const RunConfig& config);
model::ModelShape model_shape(const RunConfig& config, const data::Dataset& train);
federation::RoundConfig round_config(const RunConfig& config,
                                     const std::vector<data::Dataset>& clients);

}  // namespace qfl::cli
