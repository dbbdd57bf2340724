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

// Uniform entry point for the classical heads trained on a balanced fold.

#include <cstdint>
#include <string_view>
#include <variant>

#include "uavbench/models/forest.hpp"
#include "uavbench/models/gbdt.hpp"
#include "uavbench/models/linear.hpp"

namespace uavbench::models {

enum class ClassicalKind { logreg, mlp, random_forest, gbdt };

inline std::string_view name(ClassicalKind k) {
  switch (k) {
    case ClassicalKind::logreg: return "logreg";
    case ClassicalKind::mlp: return "mlp";
    case ClassicalKind::random_forest: return "random_forest";
    case ClassicalKind::gbdt: return "gbdt";
  }
  return "?";
}

struct ClassicalConfig {
  LogRegConfig logreg;
  MlpConfig mlp;
  ForestConfig forest;
  GbdtConfig gbdt;

  /// Same hyperparameters, every random stream reseeded from `seed`.
  ClassicalConfig with_seed(std::uint64_t seed) const {
    ClassicalConfig c = *this;
    c.mlp.seed = derive_seed(seed, "mlp");
    c.forest.seed = derive_seed(seed, "forest");
    c.gbdt.seed = derive_seed(seed, "gbdt");
    return c;
  }
};

/// Scores in [0, 1] for every row of `eval`; label = score >= 0.5.
inline Scores fit_predict(ClassicalKind kind, const ClassicalConfig& cfg, const Matrix& X, std::span<const int> y,
                          const Matrix& eval) {
  if (eval.cols() != X.cols()) throw InvalidArgument("fit_predict: evaluation width differs from training width");
  switch (kind) {
    case ClassicalKind::logreg: return LogisticRegression::fit(cfg.logreg, X, y).predict_proba(eval);
    case ClassicalKind::mlp: return Mlp::fit(cfg.mlp, X, y).predict_proba(eval);
    case ClassicalKind::random_forest: return RandomForest::fit(cfg.forest, X, y).predict_proba(eval);
    case ClassicalKind::gbdt: return GradientBoostedTrees::fit(cfg.gbdt, X, y).predict_proba(eval);
  }
  throw InvalidArgument("fit_predict: unknown model kind");
}

}  // namespace uavbench::models
