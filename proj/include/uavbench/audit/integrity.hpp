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

// Integrity audits of the fused table: exact duplicate columns, same-ratio
// of column pairs, stability of the MI top-k across seeds, and the score
// gap between a row-shuffled split and the block split.

#include <algorithm>
#include <cstring>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/text.hpp"
#include "uavbench/ingest/table.hpp"
#include "uavbench/protocol/pipeline.hpp"

namespace uavbench::audit {

namespace detail {

inline std::uint64_t bits(double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, sizeof b);
  return b;
}

inline std::uint64_t column_hash(const Matrix& m, std::size_t c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    h ^= bits(m(r, c));
    h *= 0x100000001b3ULL;
    h ^= h >> 31;
  }
  return h;
}

}  // namespace detail

/// Fraction of rows whose stored values are bit-for-bit equal.
inline double same_ratio(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("same_ratio: column lengths differ");
  if (a.empty()) throw InvalidArgument("same_ratio: empty columns");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += detail::bits(a[i]) == detail::bits(b[i]);
  return static_cast<double>(same) / static_cast<double>(a.size());
}

using ColumnPair = std::pair<std::size_t, std::size_t>;

/// Every unordered pair of identical columns (i < j), sorted.  Columns are
/// bucketed by a content hash first; only same-bucket columns are compared.
inline std::vector<ColumnPair> find_duplicate_pairs(const Matrix& m) {
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
  for (std::size_t c = 0; c < m.cols(); ++c) buckets[detail::column_hash(m, c)].push_back(c);
  std::vector<ColumnPair> out;
  for (const auto& [h, cols] : buckets) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto a = m.column(cols[i]);
      for (std::size_t j = i + 1; j < cols.size(); ++j) {
        if (same_ratio(a, m.column(cols[j])) == 1.0) out.emplace_back(cols[i], cols[j]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// For each feature, the fraction of seeds whose ranking puts it in the top
/// k.  Features in `universe`, or anywhere in a ranking, that never make a
/// top k get 0.
inline std::map<std::string, double> mi_stability(const std::vector<std::vector<std::string>>& rankings, std::size_t k = 5,
                                                  const std::vector<std::string>& universe = {}) {
  if (rankings.empty()) throw InvalidArgument("mi_stability: no rankings");
  if (rankings.size() < 2) throw InvalidArgument("mi_stability: need rankings from at least two seeds");
  if (k == 0) throw InvalidArgument("mi_stability: k must be positive");
  std::map<std::string, double> rate;
  for (const auto& f : universe) rate[f] = 0.0;
  for (const auto& r : rankings) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      auto& v = rate[r[i]];
      if (i < k) v += 1.0;
    }
  }
  for (auto& [n, v] : rate) v /= static_cast<double>(rankings.size());
  return rate;
}

struct ShuffleSensitivity {
  std::string model;
  double f1_shuffled = 0.0;
  double f1_block = 0.0;
  double delta() const { return f1_shuffled - f1_block; }
};

/// F1 macro of `model` on a row-shuffled 70/15/15 split minus its F1 on the
/// block split, same seed, same pipeline, full mode.
inline ShuffleSensitivity shuffle_sensitivity(const ingest::TelemetryTable& raw, protocol::ModelId model, std::uint64_t seed,
                                              protocol::PipelineConfig cfg = {}) {
  cfg.models = {model};
  const auto table = protocol::prepare_table(raw, cfg);
  const auto y = table.binary_labels();
  if (std::count(y.begin(), y.end(), 1) == 0 || std::count(y.begin(), y.end(), 0) == 0) {
    throw ProtocolError(seed, "shuffle sensitivity needs both classes");
  }
  const auto plan = protocol::split_blocks(protocol::make_blocks(table.rows(), cfg.k_blocks), seed, y);
  const auto blocked = protocol::evaluate_split(table, plan.row_split(), seed, FeatureMode::full, cfg);
  const auto shuffled = protocol::evaluate_split(table, protocol::shuffled_row_split(table.rows(), seed), seed,
                                                 FeatureMode::full, cfg);
  ShuffleSensitivity s;
  s.model = std::string(protocol::name(model));
  s.f1_block = blocked.records.at(0).f1_macro;
  s.f1_shuffled = shuffled.records.at(0).f1_macro;
  if (std::isnan(s.f1_block) || std::isnan(s.f1_shuffled)) {
    throw ProtocolError(seed, "shuffle sensitivity: model failed on one of the splits");
  }
  return s;
}

struct PairAudit {
  std::string a, b;
  double ratio = 0.0;
};

struct AuditReport {
  std::size_t rows = 0, cols = 0;
  std::vector<PairAudit> duplicates;
  std::vector<PairAudit> pairs;
  /// mode -> feature -> inclusion rate
  std::map<std::string, std::map<std::string, double>> inclusion;
  std::vector<ShuffleSensitivity> shuffle;
};

/// Duplicate search plus same-ratio for any explicitly requested pairs.
inline AuditReport fusion_audit(const ingest::TelemetryTable& t,
                                const std::vector<std::pair<std::string, std::string>>& pairs = {}) {
  AuditReport r;
  r.rows = t.rows();
  r.cols = t.cols();
  for (const auto& [i, j] : find_duplicate_pairs(t.features)) {
    r.duplicates.push_back({t.feature_names[i], t.feature_names[j], 1.0});
  }
  for (const auto& [a, b] : pairs) {
    const auto ia = t.column_index(a), ib = t.column_index(b);
    if (!ia || !ib) throw DataError("same-ratio pair " + a + "/" + b + " names a missing column");
    r.pairs.push_back({a, b, same_ratio(t.features.column(*ia), t.features.column(*ib))});
  }
  return r;
}

inline void write_report_text(std::ostream& os, const AuditReport& r) {
  if (r.rows > 0) os << "table: " << r.rows << " rows x " << r.cols << " features\n";
  if (r.rows > 0 || !r.duplicates.empty()) {
    os << "exact duplicate column pairs: " << r.duplicates.size() << '\n';
    for (const auto& d : r.duplicates) os << "  " << d.a << " = " << d.b << '\n';
  }
  if (!r.pairs.empty()) {
    os << "same-ratio:\n";
    for (const auto& p : r.pairs) os << "  " << p.a << " / " << p.b << ": " << text::format_double(p.ratio) << '\n';
  }
  for (const auto& [mode, rates] : r.inclusion) {
    std::vector<std::pair<std::string, double>> v(rates.begin(), rates.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    os << "MI top-k inclusion (" << mode << "):\n";
    for (const auto& [f, x] : v) {
      if (x > 0.0) os << "  " << f << ": " << text::format_double(x) << '\n';
    }
  }
  for (const auto& s : r.shuffle) {
    os << "shuffle sensitivity (" << s.model << "): shuffled F1 " << text::format_double(s.f1_shuffled) << ", block F1 "
       << text::format_double(s.f1_block) << ", delta " << text::format_double(s.delta()) << '\n';
  }
}

/// section,key,value
inline void write_report_csv(std::ostream& os, const AuditReport& r) {
  os << "section,key,value\n";
  for (const auto& d : r.duplicates) os << "duplicate," << d.a << '|' << d.b << ",1\n";
  for (const auto& p : r.pairs) os << "same_ratio," << p.a << '|' << p.b << ',' << text::format_double(p.ratio) << '\n';
  for (const auto& [mode, rates] : r.inclusion) {
    for (const auto& [f, x] : rates) os << "mi_inclusion," << mode << ':' << f << ',' << text::format_double(x) << '\n';
  }
  for (const auto& s : r.shuffle) {
    os << "shuffle_f1_shuffled," << s.model << ',' << text::format_double(s.f1_shuffled) << '\n';
    os << "shuffle_f1_block," << s.model << ',' << text::format_double(s.f1_block) << '\n';
    os << "shuffle_delta," << s.model << ',' << text::format_double(s.delta()) << '\n';
  }
}

}  // namespace uavbench::audit
