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

// Binary classification metrics with anomaly (label 1) as the positive
// class, and mean/std aggregation across seeds.  Undefined values (AUC on
// a single-class truth, FAR without normal rows) are NaN and are written
// as empty CSV fields.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/text.hpp"

namespace uavbench::metrics {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
};

inline Confusion confusion(std::span<const int> y, std::span<const int> yhat) {
  if (y.size() != yhat.size()) throw InvalidArgument("metrics: y and yhat lengths differ");
  if (y.empty()) throw InvalidArgument("metrics: empty input");
  Confusion c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool truth = y[i] != 0;
    const bool pred = yhat[i] != 0;
    if (truth && pred) ++c.tp;
    else if (!truth && pred) ++c.fp;
    else if (!truth && !pred) ++c.tn;
    else ++c.fn;
  }
  return c;
}

namespace detail {

inline double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

inline double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double p = ratio_or_zero(static_cast<double>(tp), static_cast<double>(tp + fp));
  const double r = ratio_or_zero(static_cast<double>(tp), static_cast<double>(tp + fn));
  return ratio_or_zero(2.0 * p * r, p + r);
}

}  // namespace detail

/// Unweighted mean of the F1 of class 0 and class 1.  Zero-division in
/// precision or recall counts as 0.
inline double f1_macro(const Confusion& c) {
  const double f1_pos = detail::f1(c.tp, c.fp, c.fn);
  const double f1_neg = detail::f1(c.tn, c.fn, c.fp);
  return 0.5 * (f1_pos + f1_neg);
}

inline double f1_macro(std::span<const int> y, std::span<const int> yhat) { return f1_macro(confusion(y, yhat)); }

/// Fraction of truly normal rows flagged anomalous; NaN without normals.
inline double far_normal(const Confusion& c) {
  const std::size_t normals = c.fp + c.tn;
  return normals == 0 ? kMissing : static_cast<double>(c.fp) / static_cast<double>(normals);
}

inline double far_normal(std::span<const int> y, std::span<const int> yhat) { return far_normal(confusion(y, yhat)); }

/// Mean recall over the classes present in y.
inline double balanced_accuracy(const Confusion& c) {
  double acc = 0.0;
  int present = 0;
  if (c.tp + c.fn > 0) {
    acc += static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    ++present;
  }
  if (c.tn + c.fp > 0) {
    acc += static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    ++present;
  }
  return acc / present;
}

inline double balanced_accuracy(std::span<const int> y, std::span<const int> yhat) {
  return balanced_accuracy(confusion(y, yhat));
}

/// Matthews correlation; 0 when any marginal is empty.
inline double mcc(const Confusion& c) {
  const double tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
  const double tn = static_cast<double>(c.tn), fn = static_cast<double>(c.fn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

inline double mcc(std::span<const int> y, std::span<const int> yhat) { return mcc(confusion(y, yhat)); }

/// Mann-Whitney AUC: share of (positive, negative) pairs ranked correctly,
/// ties counting one half.  Computed from mid-ranks in O(n log n).
inline double roc_auc(std::span<const int> y, std::span<const double> scores) {
  if (y.size() != scores.size()) throw InvalidArgument("roc_auc: y and scores lengths differ");
  if (y.empty()) throw InvalidArgument("roc_auc: empty input");
  std::vector<std::size_t> order(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (y[order[k]] != 0) {
        rank_sum_pos += mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = y.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) return kMissing;
  const double np = static_cast<double>(n_pos);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

inline Labels threshold_scores(std::span<const double> scores, double threshold = 0.5) {
  Labels out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= threshold ? 1 : 0;
  return out;
}

inline double positive_rate(std::span<const int> y) {
  if (y.empty()) return kMissing;
  std::size_t pos = 0;
  for (int v : y) pos += v != 0;
  return static_cast<double>(pos) / static_cast<double>(y.size());
}

struct MetricsRecord {
  std::uint64_t seed = 0;
  std::string mode;
  std::string model;
  double f1_macro = kMissing;
  double roc_auc = kMissing;
  double far_normal = kMissing;
  double bal_acc = kMissing;
  double mcc = kMissing;
  std::size_t n_train = 0, n_val = 0, n_test = 0;
  double prior_train = kMissing, prior_test = kMissing;

  friend bool operator==(const MetricsRecord& a, const MetricsRecord& b) {
    auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    return a.seed == b.seed && a.mode == b.mode && a.model == b.model && same(a.f1_macro, b.f1_macro) &&
           same(a.roc_auc, b.roc_auc) && same(a.far_normal, b.far_normal) && same(a.bal_acc, b.bal_acc) &&
           same(a.mcc, b.mcc) && a.n_train == b.n_train && a.n_val == b.n_val && a.n_test == b.n_test &&
           same(a.prior_train, b.prior_train) && same(a.prior_test, b.prior_test);
  }
};

/// Fills every metric of `rec` from test labels and scores.
inline void score_into(MetricsRecord& rec, std::span<const int> y, std::span<const double> scores,
                       double threshold = 0.5) {
  const auto yhat = threshold_scores(scores, threshold);
  const auto c = confusion(y, yhat);
  rec.f1_macro = f1_macro(c);
  rec.roc_auc = roc_auc(y, scores);
  rec.far_normal = far_normal(c);
  rec.bal_acc = balanced_accuracy(c);
  rec.mcc = mcc(c);
}

inline constexpr const char* kMetricNames[] = {"f1_macro", "roc_auc", "far_normal", "bal_acc", "mcc"};

inline double metric_value(const MetricsRecord& r, std::string_view name) {
  if (name == "f1_macro") return r.f1_macro;
  if (name == "roc_auc") return r.roc_auc;
  if (name == "far_normal") return r.far_normal;
  if (name == "bal_acc") return r.bal_acc;
  if (name == "mcc") return r.mcc;
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

inline bool record_less(const MetricsRecord& a, const MetricsRecord& b) {
  return std::tie(a.seed, a.mode, a.model) < std::tie(b.seed, b.mode, b.model);
}

struct AggregateRow {
  std::string model;
  std::string mode;
  std::string metric;
  double mean = kMissing;
  double std = kMissing;
  std::size_t n = 0;
  std::size_t n_missing = 0;
};

/// Mean and sample (n-1) standard deviation of the non-missing values.
inline AggregateRow summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("aggregate: empty group");
  AggregateRow row;
  double sum = 0.0;
  for (double v : values) {
    if (is_missing(v)) ++row.n_missing;
    else {
      sum += v;
      ++row.n;
    }
  }
  if (row.n == 0) return row;
  row.mean = sum / static_cast<double>(row.n);
  if (row.n >= 2) {
    double ss = 0.0;
    for (double v : values) {
      if (!is_missing(v)) ss += (v - row.mean) * (v - row.mean);
    }
    row.std = std::sqrt(ss / static_cast<double>(row.n - 1));
  }
  return row;
}

/// One row per (model, mode, metric), sorted by that key.
inline std::vector<AggregateRow> aggregate(std::span<const MetricsRecord> records) {
  if (records.empty()) throw InvalidArgument("aggregate: no records");
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> groups;
  for (const auto& r : records) {
    for (const char* m : kMetricNames) groups[{r.model, r.mode, m}].push_back(metric_value(r, m));
  }
  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (const auto& [key, values] : groups) {
    auto row = summarize(values);
    std::tie(row.model, row.mode, row.metric) = key;
    out.push_back(std::move(row));
  }
  return out;
}

// ---- CSV --------------------------------------------------------------

inline constexpr const char* kResultsHeader =
    "seed,mode,model,f1_macro,roc_auc,far_normal,bal_acc,mcc,n_train,n_val,n_test,prior_train,prior_test";
inline constexpr const char* kAggregateHeader = "model,mode,metric,mean,std,n_missing";

inline void write_results_csv(std::ostream& os, std::span<const MetricsRecord> records) {
  using text::format_optional;
  os << kResultsHeader << "\n";
  for (const auto& r : records) {
    os << r.seed << ',' << r.mode << ',' << r.model << ',' << format_optional(r.f1_macro) << ','
       << format_optional(r.roc_auc) << ',' << format_optional(r.far_normal) << ',' << format_optional(r.bal_acc)
       << ',' << format_optional(r.mcc) << ',' << r.n_train << ',' << r.n_val << ',' << r.n_test << ','
       << format_optional(r.prior_train) << ',' << format_optional(r.prior_test) << "\n";
  }
}

inline std::vector<MetricsRecord> read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || text::trim(line) != kResultsHeader) {
    throw DataError("results CSV: header mismatch");
  }
  auto opt = [](const std::string& s) { return text::trim(s).empty() ? kMissing : text::parse_double(s); };
  std::vector<MetricsRecord> out;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != 13) throw DataError("results CSV line " + std::to_string(lineno) + ": expected 13 fields");
    MetricsRecord r;
    r.seed = static_cast<std::uint64_t>(text::parse_int(f[0]));
    r.mode = f[1];
    r.model = f[2];
    r.f1_macro = opt(f[3]);
    r.roc_auc = opt(f[4]);
    r.far_normal = opt(f[5]);
    r.bal_acc = opt(f[6]);
    r.mcc = opt(f[7]);
    r.n_train = static_cast<std::size_t>(text::parse_int(f[8]));
    r.n_val = static_cast<std::size_t>(text::parse_int(f[9]));
    r.n_test = static_cast<std::size_t>(text::parse_int(f[10]));
    r.prior_train = opt(f[11]);
    r.prior_test = opt(f[12]);
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_aggregate_csv(std::ostream& os, std::span<const AggregateRow> rows) {
  os << kAggregateHeader << "\n";
  for (const auto& r : rows) {
    os << r.model << ',' << r.mode << ',' << r.metric << ',' << text::format_optional(r.mean) << ','
       << text::format_optional(r.std) << ',' << r.n_missing << "\n";
  }
}

inline std::vector<AggregateRow> read_aggregate_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || text::trim(line) != kAggregateHeader) {
    throw DataError("aggregate CSV: header mismatch");
  }
  std::vector<AggregateRow> out;
  while (std::getline(is, line)) {
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != 6) throw DataError("aggregate CSV: expected 6 fields");
    AggregateRow r;
    r.model = f[0];
    r.mode = f[1];
    r.metric = f[2];
    r.mean = f[3].empty() ? kMissing : text::parse_double(f[3]);
    r.std = f[4].empty() ? kMissing : text::parse_double(f[4]);
    r.n_missing = static_cast<std::size_t>(text::parse_int(f[5]));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace uavbench::metrics
