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

// Raw per-sensor streams to one aligned, labelled table.
//
// Every other stream is joined onto a base stream with a backward as-of
// match: for each base row, the latest row with TimeUS <= the base time.
// There is no tolerance window.  Base rows that precede some stream's first
// sample have nothing to join and are dropped.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/ingest/table.hpp"

namespace uavbench::ingest {

struct SensorStream {
  std::string sensor;
  std::vector<std::int64_t> time_us;
  std::vector<std::string> channels;
  Matrix values;
  /// Per-row label in 0..4, when the stream carries one.
  std::optional<std::vector<int>> labels;

  std::size_t rows() const noexcept { return time_us.size(); }

  void validate() const {
    if (sensor.empty()) throw DataError("stream with empty sensor name");
    if (values.rows() != rows() || values.cols() != channels.size()) {
      throw DataError("stream " + sensor + ": value matrix shape disagrees with time/channel lists");
    }
    if (labels && labels->size() != rows()) throw DataError("stream " + sensor + ": label column length differs");
    for (std::size_t i = 1; i < rows(); ++i) {
      if (time_us[i] <= time_us[i - 1]) {
        throw DataError("stream " + sensor + ": TimeUS not strictly increasing at row " + std::to_string(i));
      }
    }
    if (labels) {
      for (int v : *labels) {
        if (v < 0 || v > 4) throw DataError("stream " + sensor + ": label outside 0..4");
      }
    }
  }
};

struct JoinedRows {
  std::vector<std::int64_t> time_us;
  /// Stream order: base first, then the others as passed.
  std::vector<std::string> sensors;
  std::vector<std::vector<std::string>> channels;
  /// All channels side by side, in stream order.
  Matrix values;
  /// source_time(r, s): TimeUS of the stream-s row joined into row r.
  std::vector<std::vector<std::int64_t>> source_time;
  /// Labels offered by the labelled streams for each row.
  std::vector<std::vector<int>> labels;

  std::size_t rows() const noexcept { return time_us.size(); }
};

inline JoinedRows asof_align(const SensorStream& base, std::span<const SensorStream> others) {
  base.validate();
  for (const auto& s : others) s.validate();

  JoinedRows out;
  std::size_t width = base.channels.size();
  out.sensors.push_back(base.sensor);
  out.channels.push_back(base.channels);
  for (const auto& s : others) {
    out.sensors.push_back(s.sensor);
    out.channels.push_back(s.channels);
    width += s.channels.size();
  }
  out.values = Matrix(0, width);

  std::vector<std::size_t> cursor(others.size(), 0);
  std::vector<double> row(width);
  for (std::size_t r = 0; r < base.rows(); ++r) {
    const auto t = base.time_us[r];
    bool complete = true;
    std::vector<std::int64_t> src{t};
    std::vector<int> labs;
    if (base.labels) labs.push_back((*base.labels)[r]);
    std::copy(base.values.row(r).begin(), base.values.row(r).end(), row.begin());
    std::size_t col = base.channels.size();
    for (std::size_t s = 0; s < others.size(); ++s) {
      const auto& o = others[s];
      auto& k = cursor[s];
      while (k < o.rows() && o.time_us[k] <= t) ++k;
      if (k == 0) {
        complete = false;
        break;
      }
      const std::size_t hit = k - 1;
      src.push_back(o.time_us[hit]);
      if (o.labels) labs.push_back((*o.labels)[hit]);
      std::copy(o.values.row(hit).begin(), o.values.row(hit).end(), row.begin() + static_cast<std::ptrdiff_t>(col));
      col += o.channels.size();
    }
    if (!complete) continue;
    out.time_us.push_back(t);
    out.values.append_row(row);
    out.source_time.push_back(std::move(src));
    out.labels.push_back(std::move(labs));
  }
  return out;
}

/// Most frequent label, or nothing when the top count is tied or no
/// label is offered.
inline std::optional<int> vote_labels(std::span<const int> labels) {
  if (labels.empty()) return std::nullopt;
  std::map<int, int> counts;
  for (int v : labels) ++counts[v];
  int best = -1, best_n = 0;
  bool tie = false;
  for (const auto& [v, n] : counts) {
    if (n > best_n) {
      best = v;
      best_n = n;
      tie = false;
    } else if (n == best_n) {
      tie = true;
    }
  }
  if (tie) return std::nullopt;
  return best;
}

struct FinalizeStats {
  std::size_t discarded_ties = 0;
  std::vector<std::string> dropped_constant;
  std::vector<std::string> renamed;
};

/// Resolves name collisions by prefixing the sensor name, votes a label per
/// row (dropping ties and unlabelled rows), drops zero-variance columns and
/// sorts by TimeUS.
inline TelemetryTable finalize(const JoinedRows& joined, FinalizeStats* stats = nullptr) {
  FinalizeStats st;
  std::unordered_map<std::string, int> uses;
  for (const auto& chans : joined.channels) {
    for (const auto& c : chans) ++uses[c];
  }
  std::vector<std::string> names;
  for (std::size_t s = 0; s < joined.channels.size(); ++s) {
    for (const auto& c : joined.channels[s]) {
      if (uses[c] > 1) {
        names.push_back(joined.sensors[s] + "_" + c);
        st.renamed.push_back(names.back());
      } else {
        names.push_back(c);
      }
    }
  }

  IndexList keep_rows;
  std::vector<int> labels;
  for (std::size_t r = 0; r < joined.rows(); ++r) {
    const auto v = vote_labels(joined.labels[r]);
    if (!v) {
      ++st.discarded_ties;
      continue;
    }
    keep_rows.push_back(r);
    labels.push_back(*v);
  }
  if (keep_rows.empty()) throw DataError("finalize: no labelled rows survive the join");

  const Matrix vals = joined.values.select_rows(keep_rows);
  IndexList keep_cols;
  for (std::size_t c = 0; c < vals.cols(); ++c) {
    const double first = vals(0, c);
    bool constant = true;
    for (std::size_t r = 1; r < vals.rows() && constant; ++r) constant = vals(r, c) == first;
    if (constant) {
      st.dropped_constant.push_back(names[c]);
      continue;
    }
    keep_cols.push_back(c);
  }
  if (keep_cols.empty()) throw DataError("finalize: every feature column is constant");

  TelemetryTable t;
  t.features = vals.select_cols(keep_cols);
  for (auto c : keep_cols) t.feature_names.push_back(names[c]);
  for (auto r : keep_rows) t.time_us.push_back(joined.time_us[r]);
  t.label = std::move(labels);
  t.validate();
  t.sort_by_time();
  if (stats) *stats = std::move(st);
  return t;
}

/// Index of the stream with the most rows (first wins on ties), or of the
/// named one.
inline std::size_t choose_base(std::span<const SensorStream> streams, const std::string& preferred = {}) {
  if (streams.empty()) throw DataError("no sensor streams to align");
  if (!preferred.empty()) {
    for (std::size_t i = 0; i < streams.size(); ++i) {
      if (streams[i].sensor == preferred) return i;
    }
    throw DataError("base stream '" + preferred + "' not found");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < streams.size(); ++i) {
    if (streams[i].rows() > streams[best].rows()) best = i;
  }
  return best;
}

/// asof_align with the chosen base, followed by finalize.
inline TelemetryTable reconstruct(std::span<const SensorStream> streams, const std::string& base_sensor = {},
                                  FinalizeStats* stats = nullptr) {
  const auto b = choose_base(streams, base_sensor);
  std::vector<SensorStream> others;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    if (i != b) others.push_back(streams[i]);
  }
  return finalize(asof_align(streams[b], others), stats);
}

}  // namespace uavbench::ingest
