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

// Axis-aligned regression tree grown by exhaustive squared-error split
// search.  Used directly by gradient boosting (on residuals) and by the
// random forest (on 0/1 labels, where variance reduction equals Gini
// reduction up to a constant factor).
//
// Split choice is deterministic: highest gain wins; gains within a
// relative 1e-12 count as ties, resolved toward the lower feature index
// and then the lower threshold.  Rows with x <= threshold go left.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/rng.hpp"

namespace uavbench::models {

struct TreeOptions {
  /// Negative means unbounded.
  int max_depth = -1;
  std::size_t min_samples_leaf = 1;
  /// Features examined per split; 0 means all of them.
  std::size_t max_features = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  std::size_t samples = 0;
};

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

inline bool better_gain(double candidate, double incumbent) {
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

class RegressionTree {
 public:
  /// Fits on `rows` of X (duplicates allowed, as in a bootstrap sample).
  /// `rng` is only consulted when options.max_features subsamples.
  static RegressionTree fit(const Matrix& X, std::span<const double> target, std::span<const std::size_t> rows,
                            const TreeOptions& opt, Rng* rng = nullptr) {
    if (rows.empty()) throw InvalidArgument("RegressionTree: no training rows");
    if (opt.min_samples_leaf < 1) throw InvalidArgument("RegressionTree: min_samples_leaf must be >= 1");
    RegressionTree t;
    t.n_features_ = X.cols();
    IndexList idx(rows.begin(), rows.end());
    t.grow(X, target, idx, 0, opt, rng);
    return t;
  }

  static RegressionTree fit(const Matrix& X, std::span<const double> target, const TreeOptions& opt,
                            Rng* rng = nullptr) {
    IndexList rows(X.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit(X, target, rows, opt, rng);
  }

  double predict(std::span<const double> x) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
  }

  /// Leaf reached by x, for callers that rewrite leaf values.
  int leaf_index(std::span<const double> x) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(i)];
      i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return i;
  }

  std::span<const TreeNode> nodes() const noexcept { return nodes_; }
  std::size_t n_features() const noexcept { return n_features_; }

  int depth() const { return depth_from(0); }

 private:
  int depth_from(int i) const {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_from(n.left), depth_from(n.right));
  }

  static Split best_split(const Matrix& X, std::span<const double> target, std::span<const std::size_t> idx,
                          std::span<const std::size_t> features, std::size_t min_leaf) {
    Split best;
    const std::size_t n = idx.size();
    double total = 0.0;
    for (auto r : idx) total += target[r];
    const double base = total * total / static_cast<double>(n);
    std::vector<std::pair<double, double>> vals(n);  // (feature value, target)
    for (std::size_t f : features) {
      for (std::size_t i = 0; i < n; ++i) vals[i] = {X(idx[i], f), target[idx[i]]};
      std::sort(vals.begin(), vals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double left_sum = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_sum += vals[i].second;
        const std::size_t nl = i + 1, nr = n - nl;
        if (vals[i].first == vals[i + 1].first) continue;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double right_sum = total - left_sum;
        const double gain = left_sum * left_sum / static_cast<double>(nl) +
                            right_sum * right_sum / static_cast<double>(nr) - base;
        if (better_gain(gain, best.gain)) {
          best.gain = gain;
          best.feature = static_cast<int>(f);
          best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
          if (!(best.threshold < vals[i + 1].first)) best.threshold = vals[i].first;
        }
      }
    }
    return best;
  }

  int grow(const Matrix& X, std::span<const double> target, IndexList& idx, int depth, const TreeOptions& opt,
           Rng* rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    double sum = 0.0;
    for (auto r : idx) sum += target[r];
    const double mean = sum / static_cast<double>(idx.size());
    nodes_[static_cast<std::size_t>(id)].value = mean;
    nodes_[static_cast<std::size_t>(id)].samples = idx.size();

    const bool depth_ok = opt.max_depth < 0 || depth < opt.max_depth;
    bool pure = true;
    for (auto r : idx) {
      if (target[r] != target[idx[0]]) {
        pure = false;
        break;
      }
    }
    if (!depth_ok || pure || idx.size() < 2 * opt.min_samples_leaf) return id;

    IndexList features(n_features_);
    std::iota(features.begin(), features.end(), std::size_t{0});
    if (opt.max_features > 0 && opt.max_features < n_features_) {
      if (!rng) throw InvalidArgument("RegressionTree: feature subsampling needs a random source");
      rng->shuffle(std::span<std::size_t>(features));
      features.resize(opt.max_features);
      std::sort(features.begin(), features.end());
    }
    const Split s = best_split(X, target, idx, features, opt.min_samples_leaf);
    if (s.feature < 0 || !(s.gain > 0.0)) return id;

    IndexList left, right;
    for (auto r : idx) (X(r, static_cast<std::size_t>(s.feature)) <= s.threshold ? left : right).push_back(r);
    IndexList().swap(idx);
    nodes_[static_cast<std::size_t>(id)].feature = s.feature;
    nodes_[static_cast<std::size_t>(id)].threshold = s.threshold;
    const int l = grow(X, target, left, depth + 1, opt, rng);
    const int r = grow(X, target, right, depth + 1, opt, rng);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;

};

}  // namespace uavbench::models
