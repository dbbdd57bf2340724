// Copyright 2026 The uavbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Group-aware temporal splitting.  The time-sorted table is cut into K
// contiguous blocks and whole blocks (never rows) are assigned to
// train / validation / test in two seeded stages.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/rng.hpp"

namespace uavbench::protocol {

enum class Split : std::uint8_t { train, validation, test };

inline std::string_view name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

struct Block {
  std::size_t id = 0;
  std::size_t begin = 0;  // half-open row range
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Block&, const Block&) = default;
};

/// The first n mod K blocks get ceil(n/K) rows, the rest floor(n/K).
inline std::vector<Block> make_blocks(std::size_t n, std::size_t k) {
  if (k < 2) throw InvalidArgument("make_blocks: K must be at least 2");
  if (k > n) throw InvalidArgument("make_blocks: K=" + std::to_string(k) + " exceeds row count " + std::to_string(n));
  std::vector<Block> out;
  std::size_t at = 0;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t len = n / k + (b < n % k ? 1 : 0);
    out.push_back({b, at, at + len});
    at += len;
  }
  return out;
}

/// Row indices covered by explicit train / validation / test sets.
struct RowSplit {
  IndexList train, validation, test;

  const IndexList& rows(Split s) const {
    switch (s) {
      case Split::train: return train;
      case Split::validation: return validation;
      default: return test;
    }
  }
};

struct SplitPlan {
  std::uint64_t seed = 0;
  std::vector<Block> blocks;
  std::vector<Split> assignment;  // indexed by block id

  std::vector<std::size_t> blocks_in(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < assignment.size(); ++b) {
      if (assignment[b] == s) out.push_back(b);
    }
    return out;
  }

  IndexList rows(Split s) const {
    IndexList out;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (assignment[b] != s) continue;
      for (std::size_t r = blocks[b].begin; r < blocks[b].end; ++r) out.push_back(r);
    }
    return out;
  }

  RowSplit row_split() const { return {rows(Split::train), rows(Split::validation), rows(Split::test)}; }
};

/// Train block count: round(0.7 K), capped at K - 2 so validation and test
/// each keep a block.
inline std::size_t train_block_count(std::size_t k) {
  const auto r = static_cast<std::size_t>(std::llround(0.7 * static_cast<double>(k)));
  return std::min(r, k - 2);
}

/// Raises ProtocolError when any split is empty, any block is unassigned,
/// or the training rows hold a single class.
inline void check_plan(const SplitPlan& plan, std::span<const int> binary_labels = {}) {
  if (plan.assignment.size() != plan.blocks.size()) throw ProtocolError(plan.seed, "plan does not assign every block");
  for (auto s : {Split::train, Split::validation, Split::test}) {
    if (plan.blocks_in(s).empty()) throw ProtocolError(plan.seed, std::string(name(s)) + " split has no blocks");
  }
  if (binary_labels.empty()) return;
  bool seen[2] = {false, false};
  for (auto r : plan.rows(Split::train)) seen[binary_labels[r] != 0] = true;
  if (!seen[0] || !seen[1]) {
    throw ProtocolError(plan.seed, "degenerate split: training blocks hold a single class");
  }
}

/// Stage 1 shuffles block ids and gives the first train_block_count(K) to
/// train.  Stage 2 shuffles the remaining m ids and gives max(1, m/2) to
/// validation, the rest to test.
inline SplitPlan split_blocks(const std::vector<Block>& blocks, std::uint64_t seed,
                              std::span<const int> binary_labels = {}) {
  const std::size_t k = blocks.size();
  if (k < 3) throw InvalidArgument("split_blocks: need at least 3 blocks");
  SplitPlan plan;
  plan.seed = seed;
  plan.blocks = blocks;
  plan.assignment.assign(k, Split::test);

  std::vector<std::size_t> ids(k);
  for (std::size_t i = 0; i < k; ++i) ids[i] = i;
  Rng stage1(derive_seed(seed, "b2-stage1"));
  stage1.shuffle(std::span<std::size_t>(ids));
  const std::size_t n_train = train_block_count(k);
  for (std::size_t i = 0; i < n_train; ++i) plan.assignment[ids[i]] = Split::train;

  std::vector<std::size_t> rest(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  std::sort(rest.begin(), rest.end());
  Rng stage2(derive_seed(seed, "b2-stage2"));
  stage2.shuffle(std::span<std::size_t>(rest));
  const std::size_t n_val = std::max<std::size_t>(1, rest.size() / 2);
  for (std::size_t i = 0; i < n_val; ++i) plan.assignment[rest[i]] = Split::validation;

  check_plan(plan, binary_labels);
  return plan;
}

/// Row-level 70/15/15 split after a seeded shuffle; used only to measure how
/// much a leaky split inflates scores.
inline RowSplit shuffled_row_split(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw InvalidArgument("shuffled_row_split: need at least 3 rows");
  IndexList idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(derive_seed(seed, "row-shuffle"));
  rng.shuffle(std::span<std::size_t>(idx));
  const auto n_train = static_cast<std::size_t>(std::llround(0.70 * static_cast<double>(n)));
  const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n))));
  RowSplit s;
  s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                      idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
  for (auto* v : {&s.train, &s.validation, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

}  // namespace uavbench::protocol
