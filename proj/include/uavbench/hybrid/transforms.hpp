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

// Paired feature expansions for the hybrid family.  Every variant feeds the
// same gradient-boosted head with [X | T(X)]; only T changes.
//
// The balanced training fold is cut into two disjoint row sets: A trains the
// DRU, B trains the head (and fits PCA).  Overlap is a hard error because
// the head would then see rows the DRU was fit on.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string_view>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/rng.hpp"
#include "uavbench/dru/dru.hpp"
#include "uavbench/models/gbdt.hpp"

namespace uavbench::hybrid {

enum class TransformKind { raw, pca, poly2, random_rbf, dru_untrained, dru_trained };

inline constexpr std::array<TransformKind, 6> kAllTransforms = {
    TransformKind::raw,        TransformKind::pca,           TransformKind::poly2,
    TransformKind::random_rbf, TransformKind::dru_untrained, TransformKind::dru_trained};

inline std::string_view name(TransformKind k) {
  switch (k) {
    case TransformKind::raw: return "raw";
    case TransformKind::pca: return "pca";
    case TransformKind::poly2: return "poly2";
    case TransformKind::random_rbf: return "random_rbf";
    case TransformKind::dru_untrained: return "dru_untrained";
    case TransformKind::dru_trained: return "dru_trained";
  }
  return "?";
}

inline constexpr std::size_t kRbfFeatures = 5;

/// All principal components, ordered by descending variance.  Each
/// component's largest-magnitude loading is made positive so the basis is
/// reproducible.
struct Pca {
  std::vector<double> mean;
  Eigen::MatrixXd components;  // d x d, one component per column
  std::vector<double> variance;

  static Pca fit(const Matrix& X) {
    if (X.rows() < 2) throw InvalidArgument("PCA: need at least two rows");
    const auto n = static_cast<Eigen::Index>(X.rows());
    const auto d = static_cast<Eigen::Index>(X.cols());
    Eigen::MatrixXd M(n, d);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) M(r, c) = X(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
    const Eigen::RowVectorXd mu = M.colwise().mean();
    M.rowwise() -= mu;
    const Eigen::MatrixXd cov = (M.transpose() * M) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw Error("PCA: eigendecomposition failed");

    Pca p;
    p.mean.assign(mu.data(), mu.data() + d);
    p.components.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::VectorXd v = eig.eigenvectors().col(d - 1 - j);  // solver sorts ascending
      Eigen::Index arg;
      v.cwiseAbs().maxCoeff(&arg);
      if (v(arg) < 0.0) v = -v;
      p.components.col(j) = v;
      p.variance.push_back(std::max(0.0, eig.eigenvalues()(d - 1 - j)));
    }
    return p;
  }

  Matrix transform(const Matrix& X) const {
    check(X);
    Matrix out(X.rows(), mean.size());
    for (std::size_t r = 0; r < X.rows(); ++r) {
      for (std::size_t j = 0; j < mean.size(); ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < mean.size(); ++c) {
          acc += (X(r, c) - mean[c]) * components(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));
        }
        out(r, j) = acc;
      }
    }
    return out;
  }

  /// Maps scores back to centred inputs (the mean is not added back).
  Matrix inverse_transform_centered(const Matrix& Z) const {
    check(Z);
    Matrix out(Z.rows(), mean.size());
    for (std::size_t r = 0; r < Z.rows(); ++r) {
      for (std::size_t c = 0; c < mean.size(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < mean.size(); ++j) {
          acc += Z(r, j) * components(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));
        }
        out(r, c) = acc;
      }
    }
    return out;
  }

 private:
  void check(const Matrix& X) const {
    if (X.cols() != mean.size()) throw InvalidArgument("PCA: input width differs from fitted width");
  }
};

/// Degree-exactly-2 monomials: the d squares, then the d(d-1)/2 cross
/// products x_i x_j (i < j) in lexicographic order.
inline Matrix poly2(const Matrix& X) {
  const std::size_t d = X.cols();
  Matrix out(X.rows(), d + d * (d - 1) / 2);
  for (std::size_t r = 0; r < X.rows(); ++r) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < d; ++i) out(r, k++) = X(r, i) * X(r, i);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) out(r, k++) = X(r, i) * X(r, j);
    }
  }
  return out;
}

/// Random Fourier features sqrt(2/m) cos(w.x + b), w ~ N(0, I),
/// b ~ U(0, 2 pi).
struct RandomRbf {
  Matrix w;  // m x d
  std::vector<double> b;

  static RandomRbf draw(std::size_t input_dim, std::size_t m, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "random-rbf"));
    RandomRbf f;
    f.w = Matrix(m, input_dim);
    for (auto& v : f.w.data()) v = rng.normal();
    for (std::size_t i = 0; i < m; ++i) f.b.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
    return f;
  }

  Matrix transform(const Matrix& X) const {
    if (X.cols() != w.cols()) throw InvalidArgument("random_rbf: input width differs from fitted width");
    const double scale = std::sqrt(2.0 / static_cast<double>(w.rows()));
    Matrix out(X.rows(), w.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
      for (std::size_t i = 0; i < w.rows(); ++i) {
        double z = b[i];
        for (std::size_t c = 0; c < X.cols(); ++c) z += w(i, c) * X(r, c);
        out(r, i) = scale * std::cos(z);
      }
    }
    return out;
  }
};

class HybridTransform {
 public:
  TransformKind kind() const noexcept { return kind_; }
  std::size_t input_dim() const noexcept { return input_dim_; }

  std::size_t output_dim() const noexcept {
    switch (kind_) {
      case TransformKind::poly2: return input_dim_ + input_dim_ * (input_dim_ - 1) / 2;
      case TransformKind::random_rbf: return kRbfFeatures;
      case TransformKind::dru_untrained:
      case TransformKind::dru_trained: return static_cast<std::size_t>(dru_->spec.n_qubits);
      default: return input_dim_;
    }
  }

  Matrix apply(const Matrix& X) const {
    if (X.cols() != input_dim_) throw InvalidArgument("hybrid transform: input width differs from fitted width");
    switch (kind_) {
      case TransformKind::raw: return X;
      case TransformKind::pca: return pca_->transform(X);
      case TransformKind::poly2: return poly2(X);
      case TransformKind::random_rbf: return rbf_->transform(X);
      case TransformKind::dru_untrained:
      case TransformKind::dru_trained: return dru::extract_rows(*dru_, X);
    }
    throw InvalidArgument("hybrid transform: unknown kind");
  }

  /// [X | T(X)]
  Matrix concat(const Matrix& X) const { return Matrix::hconcat(X, apply(X)); }

  const std::optional<Pca>& pca() const noexcept { return pca_; }
  const std::optional<dru::DruModel>& dru_model() const noexcept { return dru_; }

  static HybridTransform identity(std::size_t d) { return HybridTransform(TransformKind::raw, d); }
  static HybridTransform quadratic(std::size_t d) { return HybridTransform(TransformKind::poly2, d); }

  static HybridTransform principal(Pca p) {
    HybridTransform t(TransformKind::pca, p.mean.size());
    t.pca_ = std::move(p);
    return t;
  }

  static HybridTransform fourier(RandomRbf f) {
    HybridTransform t(TransformKind::random_rbf, f.w.cols());
    t.rbf_ = std::move(f);
    return t;
  }

  static HybridTransform quantum(dru::DruModel m) {
    HybridTransform t(m.trained ? TransformKind::dru_trained : TransformKind::dru_untrained,
                      static_cast<std::size_t>(m.spec.n_qubits));
    t.dru_ = std::move(m);
    return t;
  }

 private:
  HybridTransform(TransformKind k, std::size_t d) : kind_(k), input_dim_(d) {}

  TransformKind kind_;
  std::size_t input_dim_;
  std::optional<Pca> pca_;
  std::optional<RandomRbf> rbf_;
  std::optional<dru::DruModel> dru_;
};

struct AbSplit {
  IndexList a;  // DRU training rows
  IndexList b;  // head training rows
};

inline void require_disjoint(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  std::vector<std::size_t> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  std::vector<std::size_t> both;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
  if (!both.empty()) {
    throw InvalidArgument("hybrid: subsets A and B share " + std::to_string(both.size()) +
                          " rows (first " + std::to_string(both.front()) + ")");
  }
}

/// Seeded per-class halving of the balanced fold.  B gets one half of every
/// class; A gets up to `max_per_class` rows from the other half.  Rows left
/// over from a capped A half are used by neither.
inline AbSplit split_ab(std::span<const int> y, std::uint64_t seed, int max_per_class = 400) {
  if (max_per_class < 1) throw InvalidArgument("split_ab: max_per_class must be positive");
  IndexList cls[2];
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) throw InvalidArgument("split_ab: labels must be binary");
    cls[y[i]].push_back(i);
  }
  if (cls[0].size() < 2 || cls[1].size() < 2) throw InvalidArgument("split_ab: need two rows per class");
  Rng rng(derive_seed(seed, "hybrid-ab"));
  AbSplit s;
  for (auto& c : cls) {
    rng.shuffle(std::span<std::size_t>(c));
    const std::size_t half = c.size() / 2;
    const std::size_t take_a = std::min<std::size_t>(half, static_cast<std::size_t>(max_per_class));
    s.a.insert(s.a.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(take_a));
    s.b.insert(s.b.end(), c.begin() + static_cast<std::ptrdiff_t>(half), c.end());
  }
  std::sort(s.a.begin(), s.a.end());
  std::sort(s.b.begin(), s.b.end());
  require_disjoint(s.a, s.b);
  return s;
}

struct FamilyOptions {
  dru::DruSpec dru_spec;
  dru::TrainBudget dru_budget;
  /// Reuse an already-trained DRU (fit on the same A rows) instead of
  /// fitting a new one.
  std::optional<dru::DruModel> trained_dru;
};

/// Fits all six transforms.  `X` is the angle-scaled balanced fold; PCA is
/// fit on the B rows, the trained DRU on the A rows only.
inline std::array<HybridTransform, 6> fit_transform_family(const Matrix& X, std::span<const int> y, const AbSplit& ab,
                                                           std::uint64_t seed, const FamilyOptions& opt = {}) {
  require_disjoint(ab.a, ab.b);
  if (X.rows() != y.size()) throw InvalidArgument("fit_transform_family: X and y lengths differ");
  const std::size_t d = X.cols();
  const Matrix XB = X.select_rows(ab.b);

  dru::DruSpec spec = opt.dru_spec;
  spec.seed = derive_seed(seed, "dru");
  if (static_cast<std::size_t>(spec.n_qubits) != d) {
    throw InvalidArgument("fit_transform_family: DRU qubit count must equal the feature width");
  }
  dru::DruModel trained;
  if (opt.trained_dru) {
    trained = *opt.trained_dru;
    if (!trained.trained || trained.spec.n_qubits != static_cast<int>(d)) {
      throw InvalidArgument("fit_transform_family: supplied DRU is untrained or has the wrong width");
    }
  } else {
    const Matrix XA = X.select_rows(ab.a);
    const Labels yA = select(y, std::span<const std::size_t>(ab.a));
    trained = dru::fit(spec, XA, yA, opt.dru_budget);
  }
  return {HybridTransform::identity(d),
          HybridTransform::principal(Pca::fit(XB)),
          HybridTransform::quadratic(d),
          HybridTransform::fourier(RandomRbf::draw(d, kRbfFeatures, seed)),
          HybridTransform::quantum(dru::untrained_model(trained.spec)),
          HybridTransform::quantum(std::move(trained))};
}

/// GBDT head on [X_B | T(X_B)], scored on [X_eval | T(X_eval)].
inline Scores hybrid_fit_predict(const HybridTransform& t, const models::GbdtConfig& cfg, const Matrix& XB,
                                 std::span<const int> yB, const Matrix& Xeval) {
  if (XB.cols() != t.input_dim() || Xeval.cols() != t.input_dim()) {
    throw InvalidArgument("hybrid_fit_predict: feature width does not match the transform");
  }
  const auto head = models::GradientBoostedTrees::fit(cfg, t.concat(XB), yB);
  return head.predict_proba(t.concat(Xeval));
}

}  // namespace uavbench::hybrid
