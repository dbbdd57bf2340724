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

// Feature-audit modes.
//
//   full    every non-constant column
//   loose   full minus nine accumulator / controller-state columns
//   strict  only the physical channels (attitude, rates and gyro bias, IMU,
//           magnetometer, vibration), read from a versioned list file
//
// Unknown names in a drop or keep list are an error, never silently skipped.

#include <algorithm>
#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "uavbench/core/error.hpp"
#include "uavbench/core/text.hpp"
#include "uavbench/ingest/table.hpp"

#ifndef UAVBENCH_CONFIG_DIR
#define UAVBENCH_CONFIG_DIR "config"
#endif

namespace uavbench::audit {

enum class FeatureMode { full, loose, strict };

inline constexpr std::array<FeatureMode, 3> kAllModes = {FeatureMode::full, FeatureMode::loose, FeatureMode::strict};

inline std::string_view name(FeatureMode m) {
  switch (m) {
    case FeatureMode::full: return "full";
    case FeatureMode::loose: return "loose";
    case FeatureMode::strict: return "strict";
  }
  return "?";
}

inline FeatureMode parse_mode(std::string_view s) {
  for (auto m : kAllModes) {
    if (name(m) == s) return m;
  }
  throw InvalidArgument("unknown feature mode '" + std::string(s) + "' (expected full, loose or strict)");
}

/// Accumulators and controller state flags removed by loose mode.
inline constexpr std::array<std::string_view, 9> kLooseDrop = {"abT",    "EnrgTot", "CurrTot", "Res", "BatRes",
                                                               "Offset", "Rout",    "POut",    "YOut"};

/// Compiled-in copy of config/strict_features_v1.txt.
inline constexpr std::array<std::string_view, 22> kStrictDefault = {
    "Roll", "Pitch", "Yaw",  "R",    "P",    "Y",    "GX",   "GY",    "GZ",    "GyrX",  "GyrY",
    "GyrZ", "AccX",  "AccY", "AccZ", "MagX", "MagY", "MagZ", "VibeX", "VibeY", "VibeZ", "Clip0"};

/// Non-physical, non-dropped columns of the reference 72-column table.
inline constexpr std::array<std::string_view, 41> kReferenceOther = {
    "DesRoll", "DesPitch", "DesYaw",  "ErrRP",   "ErrYaw",  "BARO_Alt", "Press", "BARO_Temp", "Volt",
    "VoltR",   "Curr",     "BAT_Temp", "ThI",    "ThO",     "ThH",      "DAlt",  "CTUN_Alt",  "BAlt",
    "LiftMax", "BatVolt",  "ThLimit", "TPD",     "PSCD_PD", "TVD",      "PSCD_VD", "RDes",    "PDes",
    "YDes",    "AOut",     "VN",      "VE",      "XKF1_VD", "PN",       "PE",    "XKF1_PD",   "NSats",
    "HDop",    "Lat",      "Lng",     "GPS_Alt", "Spd"};

/// The 72 feature names of the reference working table: strict physical
/// columns first, then the nine loose-drop columns, then the rest.
inline std::vector<std::string> reference_schema() {
  std::vector<std::string> out;
  for (auto s : kStrictDefault) out.emplace_back(s);
  for (auto s : kLooseDrop) out.emplace_back(s);
  for (auto s : kReferenceOther) out.emplace_back(s);
  return out;
}

/// One name per line; blank lines and '#' comments ignored.
inline std::vector<std::string> read_name_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature list '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line.substr(0, line.find('#')));
    if (!t.empty()) out.emplace_back(t);
  }
  if (out.empty()) throw DataError("feature list '" + path + "' is empty");
  return out;
}

inline std::string default_strict_list_path() { return std::string(UAVBENCH_CONFIG_DIR) + "/strict_features_v1.txt"; }

struct ModeDefinition {
  std::vector<std::string> loose_drop;
  std::vector<std::string> strict_keep;

  static ModeDefinition builtin() {
    ModeDefinition d;
    for (auto s : kLooseDrop) d.loose_drop.emplace_back(s);
    for (auto s : kStrictDefault) d.strict_keep.emplace_back(s);
    return d;
  }

  /// Built-in loose list with the strict list read from `strict_path`.
  static ModeDefinition from_file(const std::string& strict_path) {
    ModeDefinition d = builtin();
    d.strict_keep = read_name_list(strict_path);
    return d;
  }
};

/// Column indices kept by `mode`, in table order.
inline IndexList mode_columns(const std::vector<std::string>& names, FeatureMode mode,
                              const ModeDefinition& def = ModeDefinition::builtin()) {
  auto find = [&](const std::string& n) {
    const auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw DataError("feature '" + n + "' named by " + std::string(name(mode)) + " mode is not in the table");
    return static_cast<std::size_t>(it - names.begin());
  };
  std::vector<char> keep(names.size(), mode == FeatureMode::strict ? 0 : 1);
  if (mode == FeatureMode::loose) {
    for (const auto& n : def.loose_drop) keep[find(n)] = 0;
  } else if (mode == FeatureMode::strict) {
    for (const auto& n : def.strict_keep) keep[find(n)] = 1;
  }
  IndexList out;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

inline ingest::TelemetryTable apply_mode(const ingest::TelemetryTable& table, FeatureMode mode,
                                         const ModeDefinition& def = ModeDefinition::builtin()) {
  return table.select_columns(mode_columns(table.feature_names, mode, def));
}

}  // namespace uavbench::audit
