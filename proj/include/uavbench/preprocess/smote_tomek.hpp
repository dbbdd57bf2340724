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

// SMOTE oversampling of the minority class followed by Tomek-link cleaning.
// Neighbour searches are exact (brute force, squared Euclidean distance,
// ties to the lower row index).

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/rng.hpp"

namespace uavbench::preprocess {

enum class Origin : std::uint8_t { real, synthetic };

inline constexpr std::size_t kNoSource = static_cast<std::size_t>(-1);

struct BalancedFold {
  Matrix X;
  Labels y;
  std::vector<Origin> origin;
  /// Input row index for real rows, kNoSource for synthetic ones.
  IndexList source;

  std::size_t count(int label) const {
    return static_cast<std::size_t>(std::count(y.begin(), y.end(), label));
  }
};

struct SmoteTomekOptions {
  int k = 5;
  std::uint64_t seed = 0;
};

struct SmoteTomekStats {
  std::size_t synthetic = 0;
  std::size_t tomek_links = 0;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

/// x + u * (neighbour - x).
inline std::vector<double> smote_sample(std::span<const double> x, std::span<const double> neighbour, double u) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + u * (neighbour[i] - x[i]);
  return out;
}

/// For each row of `rows` (indices into X), its k nearest other rows from
/// the same list, nearest first.
inline std::vector<IndexList> nearest_within(const Matrix& X, std::span<const std::size_t> rows, std::size_t k) {
  std::vector<IndexList> out(rows.size());
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    cand.clear();
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (a != b) cand.emplace_back(squared_distance(X.row(rows[a]), X.row(rows[b])), rows[b]);
    }
    const auto kk = std::min(k, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk), cand.end());
    for (std::size_t i = 0; i < kk; ++i) out[a].push_back(cand[i].second);
  }
  return out;
}

/// Index of each row's nearest other row over the whole matrix.
inline IndexList nearest_neighbour(const Matrix& X) {
  const std::size_t n = X.rows();
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  IndexList nn(n, kNoSource);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = X.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = squared_distance(xi, X.row(j));
      // j > i, so strict '<' keeps the lowest index on ties for row i;
      // for row j, i is the lowest index seen so far.
      if (d < best[i]) {
        best[i] = d;
        nn[i] = j;
      }
      if (d < best[j] || (d == best[j] && i < nn[j])) {
        best[j] = d;
        nn[j] = i;
      }
    }
  }
  return nn;
}

/// Pairs (a, b), a < b, of opposite-label mutual nearest neighbours.
inline std::vector<std::pair<std::size_t, std::size_t>> tomek_links(const Matrix& X, std::span<const int> y) {
  const auto nn = nearest_neighbour(X);
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t a = 0; a < nn.size(); ++a) {
    const std::size_t b = nn[a];
    if (b != kNoSource && a < b && nn[b] == a && y[a] != y[b]) links.emplace_back(a, b);
  }
  return links;
}

inline BalancedFold smote_tomek(const Matrix& X, std::span<const int> y, const SmoteTomekOptions& opt = {},
                                SmoteTomekStats* stats = nullptr) {
  if (X.rows() != y.size()) throw InvalidArgument("smote_tomek: X and y lengths differ");
  if (opt.k < 1) throw InvalidArgument("smote_tomek: k must be positive");
  IndexList cls[2];
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InvalidArgument("smote_tomek: labels must be binary");
    cls[y[i]].push_back(i);
  }
  if (cls[0].empty() || cls[1].empty()) throw InvalidArgument("smote_tomek: fold holds a single class");
  const int minority = cls[1].size() < cls[0].size() ? 1 : 0;
  const auto& mrows = cls[minority];
  if (mrows.size() < 2) throw InvalidArgument("smote_tomek: minority class needs at least two rows");

  BalancedFold fold;
  fold.X = X;
  fold.y.assign(y.begin(), y.end());
  fold.origin.assign(X.rows(), Origin::real);
  fold.source.resize(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) fold.source[i] = i;

  const std::size_t need = cls[1 - minority].size() - mrows.size();
  if (need > 0) {
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(opt.k), mrows.size() - 1);
    const auto neighbours = nearest_within(X, mrows, k);
    Rng rng(derive_seed(opt.seed, "smote"));
    for (std::size_t s = 0; s < need; ++s) {
      const auto base = static_cast<std::size_t>(rng.below(mrows.size()));
      const auto& nb = neighbours[base];
      const std::size_t partner = nb[static_cast<std::size_t>(rng.below(nb.size()))];
      const double u = rng.uniform();
      fold.X.append_row(smote_sample(X.row(mrows[base]), X.row(partner), u));
      fold.y.push_back(minority);
      fold.origin.push_back(Origin::synthetic);
      fold.source.push_back(kNoSource);
    }
  }

  const auto links = tomek_links(fold.X, fold.y);
  if (stats) {
    stats->synthetic = need;
    stats->tomek_links = links.size();
  }
  if (links.empty()) return fold;

  std::vector<char> drop(fold.X.rows(), 0);
  for (const auto& [a, b] : links) drop[a] = drop[b] = 1;
  IndexList keep;
  for (std::size_t i = 0; i < drop.size(); ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  BalancedFold out;
  out.X = fold.X.select_rows(keep);
  for (auto i : keep) {
    out.y.push_back(fold.y[i]);
    out.origin.push_back(fold.origin[i]);
    out.source.push_back(fold.source[i]);
  }
  return out;
}

}  // namespace uavbench::preprocess
