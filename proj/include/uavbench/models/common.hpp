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

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"

namespace uavbench::models {

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline double log_loss(std::span<const int> y, std::span<const double> p) {
  constexpr double eps = 1e-15;
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(p[i], eps, 1.0 - eps);
    acc -= y[i] ? std::log(q) : std::log(1.0 - q);
  }
  return acc / static_cast<double>(y.size());
}

/// Shared precondition of every classifier: matching sizes, binary labels,
/// both classes present.
inline void check_binary_training_set(const Matrix& X, std::span<const int> y, const char* who) {
  if (X.rows() == 0) throw InvalidArgument(std::string(who) + ": empty training set");
  if (X.rows() != y.size()) throw InvalidArgument(std::string(who) + ": X and y lengths differ");
  bool seen[2] = {false, false};
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidArgument(std::string(who) + ": labels must be 0 or 1");
    seen[v] = true;
  }
  if (!seen[0] || !seen[1]) throw InvalidArgument(std::string(who) + ": training labels hold a single class");
}

}  // namespace uavbench::models
