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

// Scalers fitted on the training fold only and then applied to any split.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"

namespace uavbench::preprocess {

/// Quantile with linear interpolation between order statistics (the
/// default of numpy.percentile).  `sorted` must be ascending.
inline double quantile_linear(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct RobustScaler {
  std::vector<double> median;
  std::vector<double> iqr;

  static RobustScaler fit(const Matrix& train) {
    if (train.rows() == 0) throw InvalidArgument("RobustScaler: empty training matrix");
    RobustScaler s;
    s.median.resize(train.cols());
    s.iqr.resize(train.cols());
    for (std::size_t c = 0; c < train.cols(); ++c) {
      auto col = train.column(c);
      std::sort(col.begin(), col.end());
      s.median[c] = quantile_linear(col, 0.5);
      s.iqr[c] = quantile_linear(col, 0.75) - quantile_linear(col, 0.25);
    }
    return s;
  }

  double divisor(std::size_t c) const { return iqr[c] > 0.0 ? iqr[c] : 1.0; }

  Matrix transform(const Matrix& m) const {
    if (m.cols() != median.size()) throw InvalidArgument("RobustScaler: column count mismatch");
    Matrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = (out(r, c) - median[c]) / divisor(c);
    }
    return out;
  }
};

/// Min-max map of each training column onto [-pi, pi].  Values outside the
/// training range are clipped; a constant column maps to 0.
struct AngleScaler {
  std::vector<double> min;
  std::vector<double> max;

  static AngleScaler fit(const Matrix& train) {
    if (train.rows() == 0) throw InvalidArgument("AngleScaler: empty training matrix");
    AngleScaler s;
    s.min.assign(train.cols(), 0.0);
    s.max.assign(train.cols(), 0.0);
    for (std::size_t c = 0; c < train.cols(); ++c) {
      double lo = train(0, c), hi = train(0, c);
      for (std::size_t r = 1; r < train.rows(); ++r) {
        lo = std::min(lo, train(r, c));
        hi = std::max(hi, train(r, c));
      }
      s.min[c] = lo;
      s.max[c] = hi;
    }
    return s;
  }

  Matrix transform(const Matrix& m) const {
    constexpr double pi = std::numbers::pi;
    if (m.cols() != min.size()) throw InvalidArgument("AngleScaler: column count mismatch");
    Matrix out = m;
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) {
        const double span = max[c] - min[c];
        if (!(span > 0.0)) {
          out(r, c) = 0.0;
          continue;
        }
        out(r, c) = std::clamp(-pi + 2.0 * pi * (out(r, c) - min[c]) / span, -pi, pi);
      }
    }
    return out;
  }
};

/// Fits on `train`, then returns the scaled train followed by each of
/// `others` scaled with the same statistics.
template <typename Scaler>
std::vector<Matrix> fit_transform(const Matrix& train, std::span<const Matrix> others = {}) {
  const auto s = Scaler::fit(train);
  std::vector<Matrix> out;
  out.reserve(others.size() + 1);
  out.push_back(s.transform(train));
  for (const auto& o : others) out.push_back(s.transform(o));
  return out;
}

inline std::vector<Matrix> robust_fit_transform(const Matrix& train, std::span<const Matrix> others = {}) {
  return fit_transform<RobustScaler>(train, others);
}

inline std::vector<Matrix> angle_fit_transform(const Matrix& train, std::span<const Matrix> others = {}) {
  return fit_transform<AngleScaler>(train, others);
}

}  // namespace uavbench::preprocess
