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

// Plug-in mutual information between each feature and a binary label,
// after equal-frequency discretisation of the feature.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/preprocess/smote_tomek.hpp"

namespace uavbench::preprocess {

inline constexpr int kMiBins = 16;
inline constexpr const char* kMiEstimator = "plug-in MI, 16 equal-frequency bins (rank-based, ties share a bin)";

/// Rank-based equal-frequency bins: a value whose first occurrence in
/// sorted order is at rank r lands in bin floor(bins * r / n), so tied
/// values always share a bin.
inline std::vector<int> equal_frequency_bins(std::span<const double> values, int bins = kMiBins) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  std::vector<int> out(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const int b = static_cast<int>((static_cast<std::size_t>(bins) * i) / n);
    for (std::size_t k = i; k < j; ++k) out[order[k]] = b;
    i = j;
  }
  return out;
}

/// I(B; Y) in nats for discrete codes B in [0, bins) and binary Y.
inline double plugin_mutual_information(std::span<const int> codes, std::span<const int> y, int bins = kMiBins) {
  const double n = static_cast<double>(codes.size());
  std::vector<double> joint(static_cast<std::size_t>(bins) * 2, 0.0);
  for (std::size_t i = 0; i < codes.size(); ++i) joint[static_cast<std::size_t>(codes[i]) * 2 + static_cast<std::size_t>(y[i])] += 1.0;
  double py[2] = {0.0, 0.0};
  std::vector<double> pb(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t b = 0; b < pb.size(); ++b) {
    for (std::size_t c = 0; c < 2; ++c) {
      pb[b] += joint[b * 2 + c];
      py[c] += joint[b * 2 + c];
    }
  }
  double mi = 0.0;
  for (std::size_t b = 0; b < pb.size(); ++b) {
    for (std::size_t c = 0; c < 2; ++c) {
      const double j = joint[b * 2 + c];
      if (j > 0.0) mi += (j / n) * std::log(j * n / (pb[b] * py[c]));
    }
  }
  return std::max(0.0, mi);
}

struct FeatureRanking {
  /// Feature indices, most informative first.
  IndexList order;
  /// MI in nats, indexed by feature.
  std::vector<double> mi;
};

inline FeatureRanking mi_rank(const Matrix& X, std::span<const int> y) {
  if (X.rows() != y.size()) throw InvalidArgument("mi_rank: X and y lengths differ");
  std::size_t counts[2] = {0, 0};
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidArgument("mi_rank: labels must be binary");
    ++counts[v];
  }
  if (counts[0] < 2 || counts[1] < 2) throw InvalidArgument("mi_rank: degenerate fold (need two rows per class)");
  FeatureRanking r;
  r.mi.resize(X.cols());
  for (std::size_t c = 0; c < X.cols(); ++c) {
    const auto col = X.column(c);
    r.mi[c] = plugin_mutual_information(equal_frequency_bins(col), y);
  }
  r.order.resize(X.cols());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(), [&](auto a, auto b) { return r.mi[a] > r.mi[b]; });
  return r;
}

inline FeatureRanking mi_rank(const BalancedFold& fold) { return mi_rank(fold.X, fold.y); }

inline IndexList select_top_k(const FeatureRanking& ranking, std::size_t k = 5) {
  if (k == 0) throw InvalidArgument("select_top_k: k must be positive");
  if (k > ranking.order.size()) {
    throw InvalidArgument("select_top_k: k=" + std::to_string(k) + " exceeds feature count " +
                          std::to_string(ranking.order.size()));
  }
  return IndexList(ranking.order.begin(), ranking.order.begin() + static_cast<std::ptrdiff_t>(k));
}

}  // namespace uavbench::preprocess
