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

// Runs every (seed, mode) pipeline over a bounded pool of worker threads.
// Each job owns its data and writes only its own result slot, so the
// collected output does not depend on scheduling; records and log lines are
// sorted before they are returned.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "uavbench/core/text.hpp"
#include "uavbench/protocol/pipeline.hpp"

namespace uavbench::protocol {

struct RunLogEntry {
  std::uint64_t seed = 0;
  std::string mode;
  std::string model;
  std::string status;
  double seconds = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsRecord> records;
  std::vector<RunLogEntry> log;
  std::vector<SeedDiagnostics> diagnostics;

  std::size_t degenerate_jobs() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(), [](const auto& d) {
      return d.status.rfind("degenerate", 0) == 0;
    }));
  }
};

inline std::size_t default_jobs() {
  const auto n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

/// `table` is filtered and sorted here; callers pass the raw working table.
inline ExperimentResult run_experiment(const ingest::TelemetryTable& raw, std::span<const std::uint64_t> seeds,
                                       std::span<const audit::FeatureMode> modes, const PipelineConfig& cfg,
                                       std::size_t jobs = default_jobs()) {
  if (seeds.empty() || modes.empty()) throw InvalidArgument("run_experiment: need at least one seed and one mode");
  const auto table = prepare_table(raw, cfg);
  struct Job {
    std::uint64_t seed;
    audit::FeatureMode mode;
  };
  std::vector<Job> work;
  for (auto s : seeds) {
    for (auto m : modes) work.push_back({s, m});
  }
  std::vector<SeedResult> slots(work.size());
  std::vector<std::exception_ptr> errors(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) {
      try {
        slots[i] = run_seed(table, work[i].seed, work[i].mode, cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(jobs, 1, work.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult out;
  for (auto& s : slots) {
    for (const auto& t : s.timings) out.log.push_back({s.diag.seed, s.diag.mode, t.model, t.status, t.seconds});
    out.records.insert(out.records.end(), s.records.begin(), s.records.end());
    out.diagnostics.push_back(std::move(s.diag));
  }
  std::sort(out.records.begin(), out.records.end(), metrics::record_less);
  std::sort(out.log.begin(), out.log.end(),
            [](const auto& a, const auto& b) { return std::tie(a.seed, a.mode, a.model) < std::tie(b.seed, b.mode, b.model); });
  std::sort(out.diagnostics.begin(), out.diagnostics.end(),
            [](const auto& a, const auto& b) { return std::tie(a.seed, a.mode) < std::tie(b.seed, b.mode); });
  return out;
}

/// One line per (seed, mode, model): seed, mode, model, status, wall time.
inline void write_run_log(std::ostream& os, std::span<const RunLogEntry> log) {
  for (const auto& e : log) {
    os << "seed=" << e.seed << " mode=" << e.mode << " model=" << e.model << " status=" << e.status
       << " wall_s=" << text::format_double(std::round(e.seconds * 1000.0) / 1000.0) << '\n';
  }
}

}  // namespace uavbench::protocol
