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

// Derivative-free minimisation by linear approximation on a simplex inside
// a shrinking trust region.  This is the unconstrained core of COBYLA: the
// n+1 simplex vertices define a linear model of the objective, each
// iteration steps a distance rho down the model gradient from the best
// vertex, and rho halves whenever a step fails and the simplex is well
// shaped.  Every evaluation costs exactly one objective call.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uavbench/core/error.hpp"

namespace uavbench::dru {

struct OptimizeOptions {
  double rho_begin = 0.5;
  double rho_end = 1e-4;
  int max_evals = 250;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int evals = 0;
  /// Best objective value seen after each evaluation.
  std::vector<double> best_history;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

class LinearTrustRegion {
 public:
  LinearTrustRegion(const Objective& f, const OptimizeOptions& opt) : f_(f), opt_(opt) {}

  OptimizeResult run(std::vector<double> x0) {
    n_ = x0.size();
    if (n_ == 0) throw InvalidArgument("optimizer: empty parameter vector");
    if (opt_.max_evals < 1) throw InvalidArgument("optimizer: max_evals must be positive");
    if (!(opt_.rho_begin > 0.0) || !(opt_.rho_end > 0.0) || opt_.rho_end > opt_.rho_begin) {
      throw InvalidArgument("optimizer: need 0 < rho_end <= rho_begin");
    }
    rho_ = opt_.rho_begin;

    vertices_.clear();
    values_.clear();
    if (!evaluate_into(x0)) return finish();
    for (std::size_t i = 0; i < n_; ++i) {
      auto v = x0;
      v[i] += rho_;
      if (!evaluate_into(std::move(v))) return finish();
    }

    while (evals_ < opt_.max_evals && rho_ >= opt_.rho_end) {
      const std::size_t b = best_index();
      if (!build_model(b)) {
        if (!geometry_step(b)) rho_ *= 0.5;
        continue;
      }
      const double gnorm = grad_.norm();
      if (!(gnorm > 0.0) || !std::isfinite(gnorm)) {
        rho_ *= 0.5;
        continue;
      }
      const Eigen::VectorXd step = -rho_ * grad_ / gnorm;
      std::vector<double> trial(n_);
      for (std::size_t i = 0; i < n_; ++i) trial[i] = vertices_[b][i] + step[static_cast<Eigen::Index>(i)];
      const double ft = eval(trial);
      const double predicted = rho_ * gnorm;
      const double ratio = (values_[b] - ft) / predicted;

      replace_for_trial(b, step, std::move(trial), ft);

      if (ratio < 0.1) {
        if (evals_ >= opt_.max_evals) break;
        const std::size_t nb = best_index();
        if (!build_model(nb) || !geometry_step(nb)) rho_ *= 0.5;
      }
    }
    return finish();
  }

 private:
  double eval(std::span<const double> x) {
    const double v = f_(x);
    ++evals_;
    const double fv = std::isfinite(v) ? v : std::numeric_limits<double>::max();
    if (fv < best_value_) {
      best_value_ = fv;
      best_x_.assign(x.begin(), x.end());
    }
    history_.push_back(best_value_);
    return fv;
  }

  bool evaluate_into(std::vector<double> x) {
    if (evals_ >= opt_.max_evals) return false;
    const double v = eval(x);
    vertices_.push_back(std::move(x));
    values_.push_back(v);
    return true;
  }

  std::size_t best_index() const {
    return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) - values_.begin());
  }

  // Edge matrix rows are v_j - v_b for every j != b, in vertex order.
  // Fills grad_ and inv_ (the inverse of the edge matrix).
  bool build_model(std::size_t b) {
    Eigen::MatrixXd edges(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    Eigen::VectorXd df(static_cast<Eigen::Index>(n_));
    edge_vertex_.clear();
    Eigen::Index r = 0;
    for (std::size_t j = 0; j < vertices_.size(); ++j) {
      if (j == b) continue;
      for (std::size_t i = 0; i < n_; ++i) {
        edges(r, static_cast<Eigen::Index>(i)) = vertices_[j][i] - vertices_[b][i];
      }
      df[r] = values_[j] - values_[b];
      edge_vertex_.push_back(j);
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(edges);
    if (!lu.isInvertible()) return false;
    inv_ = lu.inverse();
    grad_ = inv_ * df;
    edges_ = std::move(edges);
    return grad_.allFinite();
  }

  // Swap the trial point into the simplex, dropping the vertex whose removal
  // keeps the simplex least degenerate (largest barycentric weight, scaled
  // up for far-away vertices).
  void replace_for_trial(std::size_t b, const Eigen::VectorXd& step, std::vector<double> trial, double ft) {
    const Eigen::VectorXd coef = inv_.transpose() * step;  // step = sum_j coef_j * edge_j
    std::size_t pick = edge_vertex_.size();
    double best_score = 0.0;
    for (std::size_t k = 0; k < edge_vertex_.size(); ++k) {
      const double dist = edges_.row(static_cast<Eigen::Index>(k)).norm();
      const double far = std::max(1.0, dist / rho_);
      const double score = std::abs(coef[static_cast<Eigen::Index>(k)]) * far * far;
      if (score > best_score) {
        best_score = score;
        pick = k;
      }
    }
    if (ft < values_[b]) {
      if (pick == edge_vertex_.size()) pick = 0;
    } else if (pick == edge_vertex_.size() || best_score <= 1.0) {
      // A failed step is only kept when it improves the simplex shape.
      const std::size_t worst = static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) - values_.begin());
      if (worst == b || ft >= values_[worst]) return;
      for (std::size_t k = 0; k < edge_vertex_.size(); ++k) {
        if (edge_vertex_[k] == worst && std::abs(coef[static_cast<Eigen::Index>(k)]) > 0.1) pick = k;
      }
      if (pick == edge_vertex_.size()) return;
    }
    const std::size_t j = edge_vertex_[pick];
    vertices_[j] = std::move(trial);
    values_[j] = ft;
  }

  // Re-spaces the worst-shaped vertex at distance rho from the pivot, along
  // the direction orthogonal to all other edges.  Returns false when the
  // simplex is already acceptable.
  bool geometry_step(std::size_t b) {
    if (evals_ >= opt_.max_evals) return true;
    constexpr double kAlpha = 0.25;
    constexpr double kBeta = 2.1;
    std::size_t pick = edge_vertex_.size();
    double worst_len = kBeta * rho_;
    for (std::size_t k = 0; k < edge_vertex_.size(); ++k) {
      const double len = edges_.row(static_cast<Eigen::Index>(k)).norm();
      if (len > worst_len) {
        worst_len = len;
        pick = k;
      }
    }
    if (pick == edge_vertex_.size()) {
      double worst_sigma = kAlpha * rho_;
      for (std::size_t k = 0; k < edge_vertex_.size(); ++k) {
        const double sigma = 1.0 / inv_.col(static_cast<Eigen::Index>(k)).norm();
        if (sigma < worst_sigma) {
          worst_sigma = sigma;
          pick = k;
        }
      }
    }
    if (pick == edge_vertex_.size()) return false;
    Eigen::VectorXd dir = inv_.col(static_cast<Eigen::Index>(pick));
    dir /= dir.norm();
    if (grad_.dot(dir) > 0.0) dir = -dir;
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = vertices_[b][i] + rho_ * dir[static_cast<Eigen::Index>(i)];
    const double v = eval(x);
    const std::size_t j = edge_vertex_[pick];
    vertices_[j] = std::move(x);
    values_[j] = v;
    return true;
  }

  OptimizeResult finish() {
    OptimizeResult res;
    res.x = best_x_;
    res.value = best_value_;
    res.evals = evals_;
    res.best_history = std::move(history_);
    return res;
  }

  const Objective& f_;
  OptimizeOptions opt_;
  std::size_t n_ = 0;
  double rho_ = 0.0;
  int evals_ = 0;
  std::vector<std::vector<double>> vertices_;
  std::vector<double> values_;
  std::vector<std::size_t> edge_vertex_;
  Eigen::MatrixXd edges_;
  Eigen::MatrixXd inv_;
  Eigen::VectorXd grad_;
  double best_value_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_x_;
  std::vector<double> history_;
};

}  // namespace detail

/// Minimises `f` from `x0`.  The returned point is the best one evaluated,
/// so the result is never worse than f(x0).
inline OptimizeResult minimize(const Objective& f, std::vector<double> x0, const OptimizeOptions& opt = {}) {
  return detail::LinearTrustRegion(f, opt).run(std::move(x0));
}

}  // namespace uavbench::dru
