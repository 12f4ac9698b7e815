// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/federation/metrics.hpp"

#include <json.hpp>

#include "qfl/errors.hpp"

namespace qfl::federation {

using Json = nlohmann::ordered_json;

std::string client_actor(int client_id) { return "client-" + std::to_string(client_id); }

namespace {

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

}  // namespace

std::string to_json_line(const MetricsRecord& r) {
  Json j;
  j["round"] = r.round;
  j["actor"] = r.actor;
  j["train_loss"] = opt(r.train_loss);
  j["train_acc"] = opt(r.train_acc);
  j["test_loss"] = opt(r.test_loss);
  j["test_acc"] = opt(r.test_acc);
  j["wall_ms"] = r.wall_ms;
  return j.dump();
}

MetricsRecord parse_metrics_line(const std::string& line) {
  try {
    const auto j = Json::parse(line);
    MetricsRecord r;
    r.round = j.at("round").get<int>();
    r.actor = j.at("actor").get<std::string>();
    r.train_loss = opt_from(j, "train_loss");
    r.train_acc = opt_from(j, "train_acc");
    r.test_loss = opt_from(j, "test_loss");
    r.test_acc = opt_from(j, "test_acc");
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad metrics record: ") + e.what());
  }
}

MetricsSink::MetricsSink(const std::filesystem::path& path) : path_(path) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot open metrics file " + path.string());
}

void MetricsSink::write(const MetricsRecord& record) {
  out_ << to_json_line(record) << '\n';
  out_.flush();
  if (!out_) throw IoError("write failed on metrics file " + path_.string());
}

std::vector<MetricsRecord> read_metrics_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open metrics file " + path.string());
  std::vector<MetricsRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_metrics_line(line));
  }
  return out;
}

}  // namespace qfl::federation
