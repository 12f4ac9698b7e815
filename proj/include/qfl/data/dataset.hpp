// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfl::data {

enum class SplitTag { kTrain, kTest };

/// Labelled feature matrix, one sample per row. After preprocessing every
/// feature lies in [-pi, pi] so it can be used directly as a rotation angle.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  int class_count = 0;
  SplitTag split = SplitTag::kTrain;

  std::size_t size() const { return labels.size(); }
  Eigen::Index dims() const { return features.cols(); }

  /// Rows in the given order.
  Dataset subset(std::span<const std::size_t> rows) const;
  std::vector<std::size_t> class_histogram() const;

  /// Throws DomainError on a broken invariant.
  void validate() const;

  bool operator==(const Dataset& other) const {
    return features == other.features && labels == other.labels &&
           class_count == other.class_count && split == other.split;
  }
};

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

enum class SyntheticKind { kBlobs, kTwoMoons, kXor };

SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

struct SyntheticOptions {
  int class_count = 0;  // 0: kind default (blobs 3, moons 2, xor 2); only blobs accepts others
  int dims = 2;
  double test_fraction = 0.2;
};

/// Desk-scale classification sets, scaled into [-pi, pi] and split 80/20 per class.
TrainTestSplit generate_synthetic(SyntheticKind kind, std::size_t samples, double noise,
                                  std::uint64_t seed, const SyntheticOptions& options = {});
TrainTestSplit generate_synthetic(std::string_view kind, std::size_t samples, double noise,
                                  std::uint64_t seed, const SyntheticOptions& options = {});

/// Min-max scaling onto [-pi, pi]; constant columns map to 0.
struct MinMaxScaler {
  Eigen::VectorXd min, max;

  static MinMaxScaler fit(const Eigen::MatrixXd& features);
  /// Values outside the fitted range are clamped.
  Eigen::MatrixXd transform(const Eigen::MatrixXd& features) const;
};

/// Stratified split; each class contributes floor(n_c * test_fraction) test rows.
TrainTestSplit stratified_split(const Dataset& all, double test_fraction, std::uint64_t seed);

/// Numeric CSV with a header row. Features are min-max scaled per column.
Dataset load_csv(const std::filesystem::path& path, std::string_view label_column);
/// Writes columns f0..f{d-1},label.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

}  // namespace qfl::data
