// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qfl/cli/config.hpp"
#include "qfl/federation/round_config.hpp"

namespace qfl::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitRuntime = 3,
  kExitIo = 4,
};

/// Maps the library error hierarchy onto exit codes.
int exit_code_for(const std::exception& e);

struct KeygenResult {
  std::filesystem::path dir;
  std::vector<std::filesystem::path> files;
};

/// Writes params.json, secret.key, public.key and galois.key into `out_dir`.
KeygenResult cmd_keygen(const RunConfig& config, const std::filesystem::path& out_dir,
                        std::ostream& out);

/// Final model quality plus run bookkeeping for one arm.
struct ArmSummary {
  federation::Mode mode = federation::Mode::kFhe;
  double train_loss = 0, train_acc = 0;
  double test_loss = 0, test_acc = 0;
  double wall_ms = 0;
  int rounds_run = 0;
  std::size_t metrics_rows = 0;
};

/// Loads keys from encryption.key_dir in FHE mode, trains, writes the metrics
/// file and checkpoint, prints a summary.
ArmSummary cmd_train(const RunConfig& config, std::ostream& out);

struct CompareReport {
  std::vector<ArmSummary> arms;
  double test_acc_gap_pp = 0;         // |arm0 - arm1| in percentage points
  double max_round_weight_diff = 0;   // max-abs over rounds and parameters
};

/// Runs two arms with identical seeds. Keys for an FHE arm are generated
/// inside its timed section.
CompareReport cmd_compare(const RunConfig& config, std::ostream& out,
                          std::vector<federation::Mode> arms = {federation::Mode::kFhe,
                                                                federation::Mode::kPlaintext});

std::string report_to_json(const CompareReport& report);

/// Human-readable description of a key, ciphertext, vector, checkpoint or params file.
/// Secret key coefficients are never printed.
void cmd_inspect(const std::filesystem::path& path, std::ostream& out);

/// Accepts spdlog level names (trace, debug, info, warn, error, off).
void set_log_level(std::string_view level);

/// Full command-line entry point; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qfl::cli
