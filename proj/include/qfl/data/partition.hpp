// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "qfl/data/dataset.hpp"

namespace qfl::data {

enum class PartitionStrategy { kIid, kDirichlet };

struct PartitionSpec {
  std::size_t client_count = 1;
  PartitionStrategy strategy = PartitionStrategy::kIid;
  double alpha = 1.0;  // Dirichlet concentration
  std::uint64_t rng_seed = 0;
  int max_retries = 100;
};

/// Disjoint cover of `ds` across clients. IID gives shuffled equal shares with
/// the remainder on the lowest ids; Dirichlet draws per-class proportions and
/// redraws until every client holds at least one sample.
std::vector<Dataset> partition(const Dataset& ds, const PartitionSpec& spec);

}  // namespace qfl::data
