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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "uavbench/core/rng.hpp"
#include "uavbench/models/common.hpp"
#include "uavbench/models/tree.hpp"

namespace uavbench::models {

struct ForestConfig {
  int n_trees = 200;
  int max_depth = -1;  // unbounded
  /// 0 selects ceil(sqrt(d)).
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 0;
};

/// Random forest of probability trees; the score is the mean leaf class-1
/// frequency over trees.
class RandomForest {
 public:
  static RandomForest fit(const ForestConfig& cfg, const Matrix& X, std::span<const int> y) {
    if (cfg.n_trees < 1) throw InvalidArgument("ForestConfig: n_trees must be positive");
    check_binary_training_set(X, y, "random_forest");
    RandomForest f;
    const std::size_t n = X.rows();
    std::vector<double> target(y.begin(), y.end());
    TreeOptions opt;
    opt.max_depth = cfg.max_depth;
    opt.min_samples_leaf = cfg.min_samples_leaf;
    opt.max_features = cfg.max_features == 0
                           ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(X.cols()))))
                           : cfg.max_features;
    IndexList rows(n);
    for (int t = 0; t < cfg.n_trees; ++t) {
      Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      if (cfg.bootstrap) {
        for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
      } else {
        std::iota(rows.begin(), rows.end(), std::size_t{0});
      }
      f.trees_.push_back(RegressionTree::fit(X, target, rows, opt, &rng));
    }
    return f;
  }

  double predict_proba(std::span<const double> x) const {
    double acc = 0.0;
    for (const auto& t : trees_) acc += t.predict(x);
    return acc / static_cast<double>(trees_.size());
  }

  Scores predict_proba(const Matrix& X) const {
    Scores out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_proba(X.row(i));
    return out;
  }

  std::span<const RegressionTree> trees() const noexcept { return trees_; }

 private:
  std::vector<RegressionTree> trees_;
};

}  // namespace uavbench::models
