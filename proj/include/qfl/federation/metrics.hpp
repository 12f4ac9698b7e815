// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace qfl::federation {

/// One row per (round, actor); actor is "client-<id>" or "global".
struct MetricsRecord {
  int round = 0;
  std::string actor;
  std::optional<double> train_loss;
  std::optional<double> train_acc;
  std::optional<double> test_loss;
  std::optional<double> test_acc;
  double wall_ms = 0.0;

  bool operator==(const MetricsRecord&) const = default;
};

std::string client_actor(int client_id);
inline constexpr const char* kGlobalActor = "global";

/// Single-line JSON with keys in schema order; missing values are null.
std::string to_json_line(const MetricsRecord& record);
MetricsRecord parse_metrics_line(const std::string& line);

/// Append-only JSON-lines file.
class MetricsSink {
 public:
  explicit MetricsSink(const std::filesystem::path& path);
  void write(const MetricsRecord& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::vector<MetricsRecord> read_metrics_file(const std::filesystem::path& path);

}  // namespace qfl::federation
