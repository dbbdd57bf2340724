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

// Logistic regression and a one-hidden-layer perceptron, both trained by
// full-batch gradient descent.

#include <cmath>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "uavbench/core/rng.hpp"
#include "uavbench/models/common.hpp"

namespace uavbench::models {

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix& X) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(X.rows()), static_cast<Eigen::Index>(X.cols()));
  for (std::size_t r = 0; r < X.rows(); ++r)
    for (std::size_t c = 0; c < X.cols(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = X(r, c);
  return m;
}

inline Eigen::VectorXd to_eigen(std::span<const int> y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) v[static_cast<Eigen::Index>(i)] = y[i];
  return v;
}

inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& z) { return z.unaryExpr([](double v) { return models::sigmoid(v); }); }

}  // namespace detail

struct LogRegConfig {
  /// Inverse of C: the objective is mean log-loss + l2 * |w|^2 / (2 n).
  double l2 = 1.0;
  double tolerance = 1e-6;
  int max_iter = 20000;
};

class LogisticRegression {
 public:
  static LogisticRegression fit(const LogRegConfig& cfg, const Matrix& X, std::span<const int> y) {
    check_binary_training_set(X, y, "logreg");
    const Eigen::MatrixXd A = detail::to_eigen(X);
    const Eigen::VectorXd t = detail::to_eigen(y);
    const double n = static_cast<double>(X.rows());
    const Eigen::Index d = A.cols();

    // Lipschitz bound of the gradient, including the intercept column.
    Eigen::MatrixXd Ab(A.rows(), d + 1);
    Ab << A, Eigen::VectorXd::Ones(A.rows());
    const Eigen::MatrixXd gram = Ab.transpose() * Ab / n;
    const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    const double step = 1.0 / (0.25 * lmax + cfg.l2 / n);

    LogisticRegression m;
    m.w_ = Eigen::VectorXd::Zero(d);
    m.b_ = 0.0;
    for (m.iterations_ = 0; m.iterations_ < cfg.max_iter; ++m.iterations_) {
      const Eigen::ArrayXd p = detail::sigmoid((A * m.w_).array() + m.b_);
      const Eigen::VectorXd r = p.matrix() - t;
      const Eigen::VectorXd gw = A.transpose() * r / n + (cfg.l2 / n) * m.w_;
      const double gb = r.sum() / n;
      if (std::max(gw.cwiseAbs().maxCoeff(), std::abs(gb)) < cfg.tolerance) break;
      m.w_ -= step * gw;
      m.b_ -= step * gb;
    }
    return m;
  }

  double predict_proba(std::span<const double> x) const {
    double z = b_;
    for (std::size_t i = 0; i < x.size(); ++i) z += w_[static_cast<Eigen::Index>(i)] * x[i];
    return sigmoid(z);
  }

  Scores predict_proba(const Matrix& X) const {
    Scores out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_proba(X.row(i));
    return out;
  }

  int iterations() const noexcept { return iterations_; }

 private:
  Eigen::VectorXd w_;
  double b_ = 0.0;
  int iterations_ = 0;
};

struct MlpConfig {
  int hidden = 32;
  double learning_rate = 0.05;
  int epochs = 500;
  std::uint64_t seed = 0;
};

/// d -> hidden (ReLU) -> 1 (sigmoid), mean cross-entropy, He-initialised.
class Mlp {
 public:
  static Mlp fit(const MlpConfig& cfg, const Matrix& X, std::span<const int> y) {
    check_binary_training_set(X, y, "mlp");
    if (cfg.hidden < 1 || cfg.epochs < 0) throw InvalidArgument("MlpConfig: bad sizes");
    const Eigen::MatrixXd A = detail::to_eigen(X);
    const Eigen::VectorXd t = detail::to_eigen(y);
    const double n = static_cast<double>(X.rows());
    const Eigen::Index d = A.cols(), h = cfg.hidden;

    Mlp m;
    Rng rng(derive_seed(cfg.seed, "mlp-init"));
    m.W1_.resize(d, h);
    for (Eigen::Index i = 0; i < m.W1_.size(); ++i) m.W1_.data()[i] = rng.normal(0.0, std::sqrt(2.0 / static_cast<double>(d)));
    m.b1_ = Eigen::VectorXd::Zero(h);
    m.w2_.resize(h);
    for (Eigen::Index i = 0; i < h; ++i) m.w2_[i] = rng.normal(0.0, std::sqrt(1.0 / static_cast<double>(h)));
    m.b2_ = 0.0;

    for (int e = 0; e < cfg.epochs; ++e) {
      const Eigen::MatrixXd pre = (A * m.W1_).rowwise() + m.b1_.transpose();
      const Eigen::MatrixXd act = pre.cwiseMax(0.0);
      const Eigen::ArrayXd p = detail::sigmoid((act * m.w2_).array() + m.b2_);
      const Eigen::VectorXd delta = (p.matrix() - t) / n;  // dL/dz of the output
      const Eigen::VectorXd gw2 = act.transpose() * delta;
      const double gb2 = delta.sum();
      const Eigen::MatrixXd back =
          (delta * m.w2_.transpose()).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
      const Eigen::MatrixXd gW1 = A.transpose() * back;
      const Eigen::VectorXd gb1 = back.colwise().sum().transpose();
      m.W1_ -= cfg.learning_rate * gW1;
      m.b1_ -= cfg.learning_rate * gb1;
      m.w2_ -= cfg.learning_rate * gw2;
      m.b2_ -= cfg.learning_rate * gb2;
    }
    return m;
  }

  Scores predict_proba(const Matrix& X) const {
    const Eigen::MatrixXd A = detail::to_eigen(X);
    const Eigen::MatrixXd act = ((A * W1_).rowwise() + b1_.transpose()).cwiseMax(0.0);
    const Eigen::ArrayXd p = detail::sigmoid((act * w2_).array() + b2_);
    return Scores(p.data(), p.data() + p.size());
  }

 private:
  Eigen::MatrixXd W1_;
  Eigen::VectorXd b1_;
  Eigen::VectorXd w2_;
  double b2_ = 0.0;
};

}  // namespace uavbench::models
