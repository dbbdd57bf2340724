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

// The working table: one row per aligned instant, numeric feature columns,
// a multiclass label (0 = normal, 1..4 = fault type) and the derived binary
// anomaly label.
//
// Canonical file layout: comma-separated, header row, TimeUS first, the
// feature columns in table order, `label` last.  Numbers are written in
// shortest round-trip form, so the file is byte-stable across runs.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/core/text.hpp"

namespace uavbench::ingest {

struct TelemetryTable {
  std::vector<std::int64_t> time_us;
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<int> label;

  std::size_t rows() const noexcept { return time_us.size(); }
  std::size_t cols() const noexcept { return feature_names.size(); }

  /// 1 iff any fault is present.
  Labels binary_labels() const {
    Labels out(label.size());
    for (std::size_t i = 0; i < label.size(); ++i) out[i] = label[i] != 0 ? 1 : 0;
    return out;
  }

  std::optional<std::size_t> column_index(std::string_view name) const {
    const auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - feature_names.begin());
  }

  bool is_time_sorted() const { return std::is_sorted(time_us.begin(), time_us.end()); }

  /// Stable sort of all rows by TimeUS.
  void sort_by_time() {
    if (is_time_sorted()) return;
    IndexList order(rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return time_us[a] < time_us[b]; });
    *this = select_rows(order);
  }

  TelemetryTable select_rows(std::span<const std::size_t> idx) const {
    TelemetryTable t;
    t.feature_names = feature_names;
    t.features = features.select_rows(idx);
    for (auto i : idx) {
      t.time_us.push_back(time_us[i]);
      t.label.push_back(label[i]);
    }
    return t;
  }

  TelemetryTable select_columns(std::span<const std::size_t> idx) const {
    TelemetryTable t;
    t.time_us = time_us;
    t.label = label;
    t.features = features.select_cols(idx);
    for (auto i : idx) t.feature_names.push_back(feature_names[i]);
    return t;
  }

  /// Keeps only rows whose multiclass label is in `keep`.
  TelemetryTable filter_labels(std::span<const int> keep) const {
    IndexList idx;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (std::find(keep.begin(), keep.end(), label[i]) != keep.end()) idx.push_back(i);
    }
    return select_rows(idx);
  }

  void validate() const {
    if (features.rows() != rows() || label.size() != rows()) throw DataError("table: column lengths disagree");
    if (features.cols() != cols()) throw DataError("table: feature name count disagrees with matrix width");
    std::unordered_map<std::string, int> seen;
    for (const auto& n : feature_names) {
      if (n.empty() || n == "TimeUS" || n == "label") throw DataError("table: reserved or empty column name '" + n + "'");
      if (++seen[n] > 1) throw DataError("table: duplicate column name '" + n + "'");
    }
  }

  friend bool operator==(const TelemetryTable&, const TelemetryTable&) = default;
};

inline void write_table(std::ostream& os, const TelemetryTable& t) {
  t.validate();
  os << "TimeUS";
  for (const auto& n : t.feature_names) os << ',' << n;
  os << ",label\n";
  for (std::size_t r = 0; r < t.rows(); ++r) {
    os << t.time_us[r];
    for (std::size_t c = 0; c < t.cols(); ++c) os << ',' << text::format_double(t.features(r, c));
    os << ',' << t.label[r] << '\n';
  }
}

inline TelemetryTable read_table(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("table: empty file");
  const auto header = text::split(text::trim(line), ',');
  if (header.size() < 3 || header.front() != "TimeUS" || header.back() != "label") {
    throw DataError("table: header must start with TimeUS and end with label");
  }
  TelemetryTable t;
  t.feature_names.assign(header.begin() + 1, header.end() - 1);
  const std::size_t width = t.feature_names.size();
  std::vector<double> row(width);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != header.size()) {
      throw DataError("table line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                      " fields, got " + std::to_string(f.size()));
    }
    t.time_us.push_back(text::parse_int(f.front()));
    for (std::size_t c = 0; c < width; ++c) row[c] = text::parse_double(f[c + 1]);
    if (t.features.cols() == 0) t.features = Matrix(0, width);
    t.features.append_row(row);
    t.label.push_back(static_cast<int>(text::parse_int(f.back())));
  }
  if (t.features.cols() == 0) t.features = Matrix(0, width);
  t.validate();
  return t;
}

inline TelemetryTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open table file '" + path + "'");
  return read_table(in);
}

inline void save_table(const std::string& path, const TelemetryTable& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write table file '" + path + "'");
  write_table(out, t);
}

}  // namespace uavbench::ingest
