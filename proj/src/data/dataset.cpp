// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "qfl/errors.hpp"

namespace qfl::data {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels.at(rows[i]));
  }
  out.class_count = class_count;
  out.split = split;
  return out;
}

std::vector<std::size_t> Dataset::class_histogram() const {
  std::vector<std::size_t> h(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) ++h.at(static_cast<std::size_t>(y));
  return h;
}

void Dataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw DomainError("dataset: feature rows and labels differ in length");
  }
  for (int y : labels) {
    if (y < 0 || y >= class_count) throw DomainError("dataset: label outside [0, class_count)");
  }
  if (!features.allFinite()) throw DomainError("dataset: non-finite feature");
  if (features.size() > 0 &&
      (features.maxCoeff() > kPi + 1e-12 || features.minCoeff() < -kPi - 1e-12)) {
    throw DomainError("dataset: feature outside [-pi, pi]");
  }
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "blobs") return SyntheticKind::kBlobs;
  if (name == "two_moons") return SyntheticKind::kTwoMoons;
  if (name == "xor") return SyntheticKind::kXor;
  throw ConfigError("unknown synthetic dataset kind '" + std::string(name) +
                    "' (expected blobs, two_moons or xor)");
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kBlobs: return "blobs";
    case SyntheticKind::kTwoMoons: return "two_moons";
    case SyntheticKind::kXor: return "xor";
  }
  return "unknown";
}

MinMaxScaler MinMaxScaler::fit(const Eigen::MatrixXd& features) {
  MinMaxScaler s;
  if (features.rows() == 0) {
    s.min = Eigen::VectorXd::Zero(features.cols());
    s.max = Eigen::VectorXd::Zero(features.cols());
    return s;
  }
  s.min = features.colwise().minCoeff().transpose();
  s.max = features.colwise().maxCoeff().transpose();
  return s;
}

Eigen::MatrixXd MinMaxScaler::transform(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd out(features.rows(), features.cols());
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double range = max(c) - min(c);
    for (Eigen::Index r = 0; r < features.rows(); ++r) {
      if (range == 0.0) {
        out(r, c) = 0.0;
      } else {
        const double unit = std::clamp((features(r, c) - min(c)) / range, 0.0, 1.0);
        out(r, c) = -kPi + 2.0 * kPi * unit;
      }
    }
  }
  return out;
}

TrainTestSplit stratified_split(const Dataset& all, double test_fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(all.class_count));
  for (std::size_t i = 0; i < all.size(); ++i) by_class[static_cast<std::size_t>(all.labels[i])].push_back(i);
  std::vector<std::size_t> train_rows, test_rows;
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(rows.size()) * test_fraction));
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
  }
  std::shuffle(train_rows.begin(), train_rows.end(), rng);
  std::shuffle(test_rows.begin(), test_rows.end(), rng);
  TrainTestSplit out{all.subset(train_rows), all.subset(test_rows)};
  out.train.split = SplitTag::kTrain;
  out.test.split = SplitTag::kTest;
  return out;
}

TrainTestSplit generate_synthetic(SyntheticKind kind, std::size_t samples, double noise,
                                  std::uint64_t seed, const SyntheticOptions& options) {
  int classes = options.class_count;
  if (classes == 0) classes = kind == SyntheticKind::kBlobs ? 3 : 2;
  if (kind != SyntheticKind::kBlobs && classes != 2) {
    throw ConfigError(std::string(to_string(kind)) + " is a two-class dataset");
  }
  if (classes < 2) throw ConfigError("synthetic datasets need at least two classes");
  if (options.dims < 2) throw ConfigError("synthetic datasets need at least two feature dims");
  if (samples < static_cast<std::size_t>(classes)) {
    throw ConfigError("samples must be at least the number of classes");
  }
  if (!(noise >= 0.0)) throw ConfigError("noise must be non-negative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Dataset all;
  all.class_count = classes;
  all.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(samples), options.dims);
  all.labels.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    // Round-robin labels keep class sizes within one of each other.
    const int y = static_cast<int>(i % static_cast<std::size_t>(classes));
    all.labels[i] = y;
    auto row = all.features.row(static_cast<Eigen::Index>(i));
    switch (kind) {
      case SyntheticKind::kBlobs: {
        const double phi = 2.0 * kPi * y / classes;
        row(0) = std::cos(phi);
        row(1) = std::sin(phi);
        break;
      }
      case SyntheticKind::kTwoMoons: {
        const double t = kPi * unit(rng);
        if (y == 0) {
          row(0) = std::cos(t);
          row(1) = std::sin(t);
        } else {
          row(0) = 1.0 - std::cos(t);
          row(1) = 0.5 - std::sin(t);
        }
        break;
      }
      case SyntheticKind::kXor: {
        // Quadrant chosen by label, position uniform inside it.
        const bool flip = unit(rng) < 0.5;
        const double sx = flip ? 1.0 : -1.0;
        const double sy = (y == 0) == flip ? 1.0 : -1.0;
        row(0) = sx * unit(rng);
        row(1) = sy * unit(rng);
        break;
      }
    }
    for (Eigen::Index d = 0; d < row.size(); ++d) row(d) += noise * gauss(rng);
  }
  TrainTestSplit split = stratified_split(all, options.test_fraction, rng());
  const auto scaler = MinMaxScaler::fit(split.train.features);
  split.train.features = scaler.transform(split.train.features);
  split.test.features = scaler.transform(split.test.features);
  return split;
}

TrainTestSplit generate_synthetic(std::string_view kind, std::size_t samples, double noise,
                                  std::uint64_t seed, const SyntheticOptions& options) {
  return generate_synthetic(parse_synthetic_kind(kind), samples, noise, seed, options);
}

Dataset load_csv(const std::filesystem::path& path, std::string_view label_column) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open CSV file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw IngestionError(path.string() + ": empty file, header expected");
  const auto header = split_csv_line(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw IngestionError(path.string() + ": no label column '" + std::string(label_column) + "'");
  }
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t dims = header.size() - 1;

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw IngestionError(path.string() + ": row " + std::to_string(line_no) + " has " +
                           std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(header.size()));
    }
    std::vector<double> feats;
    feats.reserve(dims);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw IngestionError(path.string() + ": row " + std::to_string(line_no) + ", column '" +
                             header[c] + "': non-numeric cell '" + cells[c] + "'");
      }
      if (c == label_idx) {
        if (v < 0.0 || v != std::floor(v) || v > 1e6) {
          throw IngestionError(path.string() + ": row " + std::to_string(line_no) +
                               ": label must be a non-negative integer");
        }
        labels.push_back(static_cast<int>(v));
      } else {
        feats.push_back(v);
      }
    }
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw IngestionError(path.string() + ": no data rows");

  Dataset ds;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dims));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < dims; ++c) {
      ds.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  ds.features = MinMaxScaler::fit(ds.features).transform(ds.features);
  ds.labels = std::move(labels);
  ds.class_count = *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
  ds.split = SplitTag::kTrain;
  return ds;
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (Eigen::Index c = 0; c < ds.dims(); ++c) out << 'f' << c << ',';
  out << "label\n";
  out.precision(17);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (Eigen::Index c = 0; c < ds.dims(); ++c) out << ds.features(static_cast<Eigen::Index>(r), c) << ',';
    out << ds.labels[r] << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace qfl::data
