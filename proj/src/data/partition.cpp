// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include "qfl/data/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qfl/errors.hpp"

namespace qfl::data {
namespace {

std::vector<std::vector<std::size_t>> iid_shares(std::size_t n, std::size_t clients,
                                                 std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> shares(clients);
  const std::size_t base = n / clients, extra = n % clients;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < clients; ++k) {
    const std::size_t take = base + (k < extra ? 1 : 0);
    shares[k].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                     order.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  return shares;
}

std::vector<std::vector<std::size_t>> dirichlet_shares(const Dataset& ds, const PartitionSpec& spec,
                                                       std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(spec.alpha, 1.0);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.class_count));
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

  std::vector<std::vector<std::size_t>> shares(spec.client_count);
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::vector<double> p(spec.client_count);
    double total = 0;
    for (auto& x : p) total += (x = gamma(rng));
    // Cumulative proportions -> cut points; the last client absorbs rounding.
    double cumulative = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < spec.client_count; ++k) {
      cumulative += total > 0 ? p[k] / total : 1.0 / static_cast<double>(spec.client_count);
      std::size_t end = k + 1 == spec.client_count
                            ? rows.size()
                            : static_cast<std::size_t>(std::llround(cumulative * static_cast<double>(rows.size())));
      end = std::clamp(end, start, rows.size());
      shares[k].insert(shares[k].end(), rows.begin() + static_cast<std::ptrdiff_t>(start),
                       rows.begin() + static_cast<std::ptrdiff_t>(end));
      start = end;
    }
  }
  return shares;
}

}  // namespace

std::vector<Dataset> partition(const Dataset& ds, const PartitionSpec& spec) {
  if (spec.client_count < 1) throw ConfigError("partition: client_count must be >= 1");
  if (ds.size() < spec.client_count) {
    throw ConfigError("partition: " + std::to_string(ds.size()) + " samples cannot cover " +
                      std::to_string(spec.client_count) + " clients");
  }
  std::mt19937_64 rng(spec.rng_seed);
  std::vector<std::vector<std::size_t>> shares;
  if (spec.strategy == PartitionStrategy::kIid) {
    shares = iid_shares(ds.size(), spec.client_count, rng);
  } else {
    if (!(spec.alpha > 0.0)) throw ConfigError("partition: dirichlet alpha must be > 0");
    bool ok = false;
    for (int attempt = 0; attempt <= spec.max_retries && !ok; ++attempt) {
      shares = dirichlet_shares(ds, spec, rng);
      ok = std::all_of(shares.begin(), shares.end(), [](const auto& s) { return !s.empty(); });
    }
    if (!ok) {
      throw ConfigError("partition: dirichlet draw left a client empty after " +
                        std::to_string(spec.max_retries) + " retries");
    }
  }
  std::vector<Dataset> out;
  out.reserve(shares.size());
  for (const auto& rows : shares) out.push_back(ds.subset(rows));
  return out;
}

}  // namespace qfl::data
