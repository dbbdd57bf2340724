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

// Gradient boosting with logistic loss.  Each round fits a least-squares
// regression tree to the negative gradient y - p and adds it with
// shrinkage.  With leaf values equal to the mean residual and a learning
// rate below 8 the training log-loss cannot increase from one round to the
// next (the loss curvature is bounded by 1/4).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "uavbench/models/common.hpp"
#include "uavbench/models/tree.hpp"

namespace uavbench::models {

struct GbdtConfig {
  int n_trees = 200;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_trees < 1 || max_depth < 1 || min_samples_leaf < 1) throw InvalidArgument("GbdtConfig: sizes must be positive");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw InvalidArgument("GbdtConfig: learning_rate must be in (0, 1]");
  }

  friend bool operator==(const GbdtConfig&, const GbdtConfig&) = default;
};

class GradientBoostedTrees {
 public:
  static GradientBoostedTrees fit(const GbdtConfig& cfg, const Matrix& X, std::span<const int> y) {
    cfg.validate();
    check_binary_training_set(X, y, "gbdt");
    GradientBoostedTrees m;
    m.cfg_ = cfg;
    const auto n = X.rows();
    double pos = 0.0;
    for (int v : y) pos += v;
    const double prior = pos / static_cast<double>(n);
    m.bias_ = std::log(prior / (1.0 - prior));

    std::vector<double> F(n, m.bias_), p(n), residual(n);
    TreeOptions opt;
    opt.max_depth = cfg.max_depth;
    opt.min_samples_leaf = static_cast<std::size_t>(cfg.min_samples_leaf);
    for (std::size_t i = 0; i < n; ++i) p[i] = sigmoid(F[i]);
    m.train_loss_.push_back(log_loss(y, p));
    for (int t = 0; t < cfg.n_trees; ++t) {
      for (std::size_t i = 0; i < n; ++i) residual[i] = static_cast<double>(y[i]) - p[i];
      auto tree = RegressionTree::fit(X, residual, opt);
      for (std::size_t i = 0; i < n; ++i) {
        F[i] += cfg.learning_rate * tree.predict(X.row(i));
        p[i] = sigmoid(F[i]);
      }
      m.trees_.push_back(std::move(tree));
      m.train_loss_.push_back(log_loss(y, p));
    }
    return m;
  }

  double decision_function(std::span<const double> x) const {
    double f = bias_;
    for (const auto& t : trees_) f += cfg_.learning_rate * t.predict(x);
    return f;
  }

  double predict_proba(std::span<const double> x) const { return sigmoid(decision_function(x)); }

  Scores predict_proba(const Matrix& X) const {
    Scores out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_proba(X.row(i));
    return out;
  }

  /// Training log-loss before any tree (index 0) and after each round.
  std::span<const double> train_loss() const noexcept { return train_loss_; }
  std::span<const RegressionTree> trees() const noexcept { return trees_; }
  const GbdtConfig& config() const noexcept { return cfg_; }

 private:
  GbdtConfig cfg_;
  double bias_ = 0.0;
  std::vector<RegressionTree> trees_;
  std::vector<double> train_loss_;
};

}  // namespace uavbench::models
