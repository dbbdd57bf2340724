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

// Synthetic stand-in for the flight-log table.
//
// Rows come in episodes separated by long TimeUS gaps.  Each episode is cut
// into equal segments that alternate normal / fault, so every fault type
// occupies contiguous stretches of time like a real injected fault.  Fault 3
// recurs in every episode; faults 1, 2 and 4 each belong to one episode.
//
// Columns follow the reference 72-column schema:
//  * physical channels are unit noise, with a mean shift of
//    `physical_strength` on five fault-bearing channels (half that on two
//    more) while a fault is active;
//  * every other column is a proxy: unit noise plus `proxy_strength` times a
//    context signal.  The context mixes the fault indicator (weight
//    `proxy_label_coupling`) with a per-segment random offset (the rest),
//    i.e. segment identity.  Accumulators (abT, EnrgTot, CurrTot) carry the
//    running sum of that context instead.
//
// With `temporal = false` labels, and offsets, are drawn per row, which
// removes all temporal structure.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uavbench/audit/modes.hpp"
#include "uavbench/core/error.hpp"
#include "uavbench/core/rng.hpp"
#include "uavbench/ingest/table.hpp"

namespace uavbench::ingest {

struct SynthSpec {
  std::size_t n_rows = 4817;
  int n_episodes = 3;
  int segments_per_episode = 8;
  std::int64_t start_us = 1'000'000;
  std::int64_t tick_us = 100'000;
  std::int64_t gap_us = 60'000'000;
  double physical_strength = 0.6;
  double proxy_strength = 3.0;
  double proxy_label_coupling = 1.0;
  bool temporal = true;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_episodes < 1 || segments_per_episode < 2) throw InvalidArgument("SynthSpec: need >= 1 episode and >= 2 segments");
    if (n_rows < static_cast<std::size_t>(n_episodes * segments_per_episode) * 2) {
      throw InvalidArgument("SynthSpec: too few rows for the requested segments");
    }
    if (tick_us <= 0 || gap_us <= tick_us) throw InvalidArgument("SynthSpec: need tick > 0 and gap > tick");
    if (physical_strength < 0.0 || proxy_strength < 0.0) throw InvalidArgument("SynthSpec: strengths must be >= 0");
    if (!(proxy_label_coupling >= 0.0 && proxy_label_coupling <= 1.0)) {
      throw InvalidArgument("SynthSpec: proxy_label_coupling must be in [0, 1]");
    }
  }

  /// Proxies that track the fault label; full mode clearly beats strict.
  static SynthSpec proxy_heavy(std::uint64_t seed = 0) {
    SynthSpec s;
    s.seed = seed;
    return s;
  }

  /// Proxies that only identify segments, no physical signal: a row-shuffled
  /// split can memorise segments, a block split cannot.
  static SynthSpec segment_proxy(std::uint64_t seed = 0) {
    SynthSpec s;
    s.physical_strength = 0.0;
    s.proxy_label_coupling = 0.0;
    s.seed = seed;
    return s;
  }

  /// No temporal structure; physical signal only.
  static SynthSpec iid(std::uint64_t seed = 0) {
    SynthSpec s;
    s.temporal = false;
    s.physical_strength = 1.5;
    s.proxy_strength = 0.0;
    s.seed = seed;
    return s;
  }
};

inline constexpr std::int64_t kDefaultEpisodeGapUs = 10'000'000;

/// Episodes = 1 + number of consecutive TimeUS steps longer than the gap.
inline int count_episodes(std::span<const std::int64_t> time_us, std::int64_t gap_threshold_us = kDefaultEpisodeGapUs) {
  if (time_us.empty()) return 0;
  int n = 1;
  for (std::size_t i = 1; i < time_us.size(); ++i) n += (time_us[i] - time_us[i - 1]) > gap_threshold_us ? 1 : 0;
  return n;
}

namespace detail {

inline double physical_weight(std::string_view n) {
  for (auto s : {"Yaw", "GX", "MagY", "GY", "GZ"}) {
    if (n == s) return 1.0;
  }
  if (n == "AccZ" || n == "VibeZ") return 0.5;
  return 0.0;
}

inline bool is_accumulator(std::string_view n) { return n == "abT" || n == "EnrgTot" || n == "CurrTot"; }

/// Deterministic per-column proxy weight: 1 for the loose-drop columns,
/// 0.25..0.75 for the rest.
inline double proxy_weight(std::string_view n) {
  for (auto s : audit::kLooseDrop) {
    if (n == s) return 1.0;
  }
  return 0.25 + 0.5 * static_cast<double>(derive_seed(0, n) >> 11) * 0x1.0p-53;
}

inline std::vector<std::size_t> even_sizes(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, total / parts);
  for (std::size_t i = 0; i < total % parts; ++i) ++out[i];
  return out;
}

}  // namespace detail

inline TelemetryTable synth_generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, "synth"));
  const auto names = audit::reference_schema();
  const std::size_t d = names.size();
  const std::size_t n = spec.n_rows;
  const std::size_t strict_n = audit::kStrictDefault.size();

  // Row layout: episode, segment, label.
  TelemetryTable t;
  t.feature_names = names;
  t.time_us.reserve(n);
  t.label.reserve(n);
  std::vector<std::size_t> segment_of(n), episode_of(n);
  const int episode_faults[] = {1, 2, 4};
  std::size_t row = 0, segment_id = 0;
  const auto ep_sizes = detail::even_sizes(n, static_cast<std::size_t>(spec.n_episodes));
  for (int e = 0; e < spec.n_episodes; ++e) {
    const auto seg_sizes = detail::even_sizes(ep_sizes[e], static_cast<std::size_t>(spec.segments_per_episode));
    std::size_t local = 0;
    for (int s = 0; s < spec.segments_per_episode; ++s, ++segment_id) {
      const int fault = (s % 2 == 0) ? 0 : ((s / 2) % 2 == 0 ? 3 : episode_faults[e % 3]);
      for (std::size_t i = 0; i < seg_sizes[s]; ++i, ++row, ++local) {
        t.time_us.push_back(spec.start_us + e * spec.gap_us +
                            static_cast<std::int64_t>(row) * spec.tick_us);
        int lab = fault;
        if (!spec.temporal) lab = rng.bernoulli(0.5) ? 1 + static_cast<int>(rng.below(4)) : 0;
        t.label.push_back(lab);
        segment_of[row] = segment_id;
        episode_of[row] = static_cast<std::size_t>(e);
      }
    }
  }
  const std::size_t n_segments = segment_id;
  const double mean_segment = static_cast<double>(n) / static_cast<double>(n_segments);

  // Per-segment offsets for each proxy column.
  Matrix offsets(n_segments, d);
  for (auto& v : offsets.data()) v = rng.normal();

  t.features = Matrix(n, d);
  std::vector<double> weight(d);
  for (std::size_t c = 0; c < d; ++c) {
    weight[c] = c < strict_n ? detail::physical_weight(names[c]) : detail::proxy_weight(names[c]);
  }
  std::vector<double> running(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && episode_of[r] != episode_of[r - 1]) std::fill(running.begin(), running.end(), 0.0);
    const double fault = t.label[r] != 0 ? 1.0 : 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double noise = rng.normal();
      if (c < strict_n) {
        t.features(r, c) = noise + spec.physical_strength * weight[c] * fault;
        continue;
      }
      const double seg = spec.temporal ? offsets(segment_of[r], c) : rng.normal();
      const double context = spec.proxy_label_coupling * fault + (1.0 - spec.proxy_label_coupling) * seg;
      if (detail::is_accumulator(names[c])) {
        running[c] += context / mean_segment;
        t.features(r, c) = noise + spec.proxy_strength * weight[c] * running[c];
      } else {
        t.features(r, c) = noise + spec.proxy_strength * weight[c] * context;
      }
    }
  }
  t.validate();
  return t;
}

}  // namespace uavbench::ingest
