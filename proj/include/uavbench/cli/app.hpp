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

// The `uavbench` command line: ingest, audit, run, aggregate, report.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 every (seed, mode) job hit a degenerate split.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uavbench/audit/integrity.hpp"
#include "uavbench/cli/config.hpp"
#include "uavbench/cli/report.hpp"
#include "uavbench/ingest/raw.hpp"
#include "uavbench/ingest/synth.hpp"
#include "uavbench/ingest/table.hpp"
#include "uavbench/metrics/metrics.hpp"
#include "uavbench/protocol/runner.hpp"

namespace uavbench::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kAllDegenerate = 3 };

inline constexpr const char* kResultsFile = "results.csv";
inline constexpr const char* kAggregateFile = "aggregate.csv";
inline constexpr const char* kRunLogFile = "run.log";
inline constexpr const char* kSelectionFile = "selection.csv";

/// Flags shared by run and audit that override the config file.
struct Overrides {
  std::string config;
  std::string table;
  std::string out;
  std::string seeds;
  std::string modes;
  std::string labels;
  std::size_t k = 0;
  std::size_t jobs = 0;
};

inline RunConfig resolve_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (!o.table.empty()) {
    c.table = o.table;
    c.raw_dir.clear();
  }
  if (!o.out.empty()) c.out = o.out;
  if (!o.seeds.empty()) c.seeds = parse_seed_list(o.seeds);
  if (!o.modes.empty()) {
    c.modes.clear();
    for (const auto& m : text::split(o.modes, ',')) c.modes.push_back(audit::parse_mode(text::trim(m)));
  }
  if (!o.labels.empty()) {
    c.label_filter.clear();
    for (const auto& l : text::split(o.labels, ',')) c.label_filter.push_back(static_cast<int>(text::parse_int(text::trim(l))));
  }
  if (o.k != 0) c.k = o.k;
  if (o.jobs != 0) c.jobs = o.jobs;
  c.validate();
  return c;
}

inline ingest::TelemetryTable load_raw(const std::string& dir, const std::string& base, const std::string& manifest,
                                       std::ostream& out) {
  if (!manifest.empty()) {
    const auto bad = ingest::verify_checksums(dir, manifest);
    if (!bad.empty()) {
      throw DataError("checksum mismatch for " + bad.front().file + (bad.size() > 1 ? " and " + std::to_string(bad.size() - 1) + " more" : ""));
    }
    out << "checksums verified against " << manifest << '\n';
  }
  ingest::FinalizeStats st;
  auto t = ingest::reconstruct(ingest::read_raw_dir(dir), base, &st);
  out << "discarded " << st.discarded_ties << " tied rows; dropped " << st.dropped_constant.size()
      << " constant columns; renamed " << st.renamed.size() << " colliding channels\n";
  return t;
}

inline ingest::TelemetryTable load_dataset(const RunConfig& c, std::ostream& out) {
  if (!c.table.empty()) return ingest::load_table(c.table);
  if (!c.raw_dir.empty()) return load_raw(c.raw_dir, c.base_stream, c.checksums, out);
  return ingest::synth_generate(c.synth);
}

inline void write_text_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot write '" + p.string() + "'");
  f << body;
}

// ---- commands ------------------------------------------------------------

inline int cmd_ingest(const std::string& raw, bool synth, const std::string& config, const std::string& base,
                      const std::string& manifest, const std::string& out_path, std::ostream& out) {
  if (raw.empty() == !synth) throw InvalidArgument("ingest needs exactly one of --raw DIR or --synth");
  ingest::TelemetryTable t;
  if (synth) {
    Overrides o;
    o.config = config;
    t = ingest::synth_generate(resolve_config(o).synth);
  } else {
    t = load_raw(raw, base, manifest, out);
  }
  ingest::save_table(out_path, t);
  out << "wrote " << t.rows() << " rows x " << t.cols() << " features to " << out_path << '\n';
  return kOk;
}

inline std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : text::split(s, ',')) {
    const auto t = std::string(text::trim(p));
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw InvalidArgument("pair '" + t + "' must look like A:B");
    out.emplace_back(t.substr(0, colon), t.substr(colon + 1));
  }
  return out;
}

inline int cmd_audit(const std::string& kind, const Overrides& o, const std::string& pairs, const std::string& model,
                     bool write_files, std::ostream& out) {
  const RunConfig c = resolve_config(o);
  const auto raw = load_dataset(c, out);
  audit::AuditReport rep;
  if (kind == "fusion") {
    std::vector<std::pair<std::string, std::string>> ps;
    if (!pairs.empty()) {
      ps = parse_pairs(pairs);
    } else {
      for (const auto& p : parse_pairs("ErrRP:ErrYaw,MagY:MagZ")) {
        if (raw.column_index(p.first) && raw.column_index(p.second)) ps.push_back(p);
      }
    }
    rep = audit::fusion_audit(raw, ps);
  } else if (kind == "proxy") {
    const auto cfg = c.pipeline();
    const auto table = protocol::prepare_table(raw, cfg);
    const auto y = table.binary_labels();
    const auto blocks = protocol::make_blocks(table.rows(), cfg.k_blocks);
    for (auto mode : c.modes) {
      std::vector<std::vector<std::string>> rankings;
      const auto cols = audit::mode_columns(table.feature_names, mode, cfg.modes);
      std::vector<std::string> universe;
      for (auto i : cols) universe.push_back(table.feature_names[i]);
      for (auto seed : c.seeds) {
        try {
          const auto plan = protocol::split_blocks(blocks, seed, y);
          const auto p = protocol::prepare_fold(table, plan.row_split(), mode, cfg, seed);
          std::vector<std::string> names;
          for (auto i : p.ranking.order) names.push_back(table.feature_names[p.mode_columns[i]]);
          rankings.push_back(std::move(names));
        } catch (const ProtocolError& e) {
          out << "skipping " << e.what() << '\n';
        }
      }
      rep.inclusion[std::string(audit::name(mode))] = audit::mi_stability(rankings, cfg.top_k, universe);
    }
  } else if (kind == "shuffle") {
    const auto id = protocol::parse_model(model);
    for (auto seed : c.seeds) {
      auto s = audit::shuffle_sensitivity(raw, id, seed, c.pipeline());
      s.model += "@seed" + std::to_string(seed);
      rep.shuffle.push_back(s);
    }
  } else {
    throw InvalidArgument("unknown audit kind '" + kind + "'");
  }
  std::ostringstream txt, csv;
  audit::write_report_text(txt, rep);
  audit::write_report_csv(csv, rep);
  out << txt.str();
  if (write_files) {
    fs::create_directories(c.out);
    write_text_file(fs::path(c.out) / ("audit_" + kind + ".txt"), txt.str());
    write_text_file(fs::path(c.out) / ("audit_" + kind + ".csv"), csv.str());
  }
  return kOk;
}

/// Runs the experiment described by `c` and writes results, run log and
/// selection files into c.out.  The aggregate is left to the caller.
inline protocol::ExperimentResult execute_run(const RunConfig& c, std::ostream& out) {
  const fs::path dir(c.out);
  const auto table = load_dataset(c, out);
  const auto cfg = c.pipeline();
  const auto res = protocol::run_experiment(table, c.seeds, c.modes, cfg, c.jobs == 0 ? protocol::default_jobs() : c.jobs);
  fs::create_directories(dir);

  std::ostringstream results, log, selection;
  metrics::write_results_csv(results, res.records);
  protocol::write_run_log(log, res.log);
  selection << "seed,mode,status,selected_features,physical_oracle_features\n";
  for (const auto& d : res.diagnostics) {
    std::string status = d.status;
    std::replace(status.begin(), status.end(), ',', ';');
    selection << d.seed << ',' << d.mode << ',' << status << ',' << text::join(d.selected_features, ";") << ','
              << text::join(d.physical_features, ";") << '\n';
  }
  write_text_file(dir / kResultsFile, results.str());
  write_text_file(dir / kRunLogFile, log.str());
  write_text_file(dir / kSelectionFile, selection.str());
  return res;
}

inline int cmd_run(const Overrides& o, bool overwrite, std::ostream& out, std::ostream& err) {
  const RunConfig c = resolve_config(o);
  const fs::path dir(c.out);
  if (fs::exists(dir / kResultsFile) && !overwrite) {
    err << "error: " << (dir / kResultsFile).string() << " already exists; pass --overwrite to replace it\n";
    return kUsage;
  }
  const auto res = execute_run(c, out);
  const auto degenerate = res.degenerate_jobs();
  for (const auto& d : res.diagnostics) {
    if (d.status != "ok") out << "seed " << d.seed << " mode " << d.mode << ": " << d.status << '\n';
  }
  out << "wrote " << res.records.size() << " result rows to " << (dir / kResultsFile).string() << " ("
      << degenerate << " of " << res.diagnostics.size() << " seed/mode jobs degenerate)\n";
  if (degenerate == res.diagnostics.size()) {
    err << "error: every seed produced a degenerate split\n";
    return kAllDegenerate;
  }
  std::ostringstream agg;
  metrics::write_aggregate_csv(agg, metrics::aggregate(res.records));
  write_text_file(dir / kAggregateFile, agg.str());
  return kOk;
}

inline std::vector<metrics::MetricsRecord> read_results_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("results directory '" + dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto n = e.path().filename().string();
    if (e.is_regular_file() && n.rfind("results", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<metrics::MetricsRecord> all;
  for (const auto& p : files) {
    std::ifstream in(p);
    auto recs = metrics::read_results_csv(in);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  if (all.empty()) throw DataError("no result rows found in '" + dir.string() + "'");
  std::sort(all.begin(), all.end(), metrics::record_less);
  return all;
}

inline int cmd_aggregate(const std::string& results_dir, const std::string& out_file, std::ostream& out) {
  const auto recs = read_results_dir(results_dir);
  std::ostringstream agg;
  metrics::write_aggregate_csv(agg, metrics::aggregate(recs));
  const fs::path target = out_file.empty() ? fs::path(results_dir) / kAggregateFile : fs::path(out_file);
  write_text_file(target, agg.str());
  out << agg.str();
  return kOk;
}

inline int cmd_report(const std::string& aggregate_file, const std::string& out_dir, std::ostream& out) {
  std::ifstream in(aggregate_file);
  if (!in) throw DataError("cannot open aggregate file '" + aggregate_file + "'");
  const auto rows = metrics::read_aggregate_csv(in);
  if (rows.empty()) throw DataError("aggregate file '" + aggregate_file + "' has no rows");
  fs::create_directories(out_dir);
  for (const char* m : metrics::kMetricNames) {
    std::ostringstream svg;
    write_bar_chart_svg(svg, rows, m);
    write_text_file(fs::path(out_dir) / (std::string(m) + ".svg"), svg.str());
  }
  metrics::write_aggregate_csv(out, rows);
  return kOk;
}

// ---- entry point -----------------------------------------------------------

inline void add_overrides(CLI::App* cmd, Overrides& o, bool with_jobs) {
  cmd->add_option("--config", o.config, "TOML run configuration");
  cmd->add_option("--table", o.table, "canonical table file (overrides the config data source)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seeds", o.seeds, "seed list, e.g. 0-9 or 0,3,7");
  cmd->add_option("--modes", o.modes, "comma-separated feature modes (full,loose,strict)");
  cmd->add_option("--k", o.k, "number of temporal blocks");
  cmd->add_option("--labels", o.labels, "keep only these multiclass labels, e.g. 0,3");
  if (with_jobs) cmd->add_option("--jobs", o.jobs, "worker threads (default: one per core)");
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Leakage-aware benchmark for UAV telemetry anomaly detection", "uavbench"};
  app.require_subcommand(1);

  std::string raw, ingest_out, base, manifest, ingest_config;
  bool synth = false;
  auto* ingest = app.add_subcommand("ingest", "build the canonical table from raw sensor files or the synthetic generator");
  ingest->add_option("--raw", raw, "directory of per-sensor files");
  ingest->add_flag("--synth", synth, "write the synthetic table described by --config instead");
  ingest->add_option("--config", ingest_config, "TOML config ([synth] section)");
  ingest->add_option("--base", base, "base stream for alignment (default: most rows)");
  ingest->add_option("--checksums", manifest, "sha256sum manifest to verify the raw files against");
  ingest->add_option("--out", ingest_out, "output table file")->required();

  Overrides audit_o;
  std::string audit_kind, pairs, model = "xgboost";
  bool audit_write = false;
  auto* audit_cmd = app.add_subcommand("audit", "integrity audits: fusion, proxy or shuffle");
  audit_cmd->add_option("kind", audit_kind, "fusion | proxy | shuffle")
      ->required()
      ->check(CLI::IsMember({"fusion", "proxy", "shuffle"}));
  add_overrides(audit_cmd, audit_o, false);
  audit_cmd->add_option("--pairs", pairs, "same-ratio pairs for fusion, e.g. ErrRP:ErrYaw,MagY:MagZ");
  audit_cmd->add_option("--model", model, "model for the shuffle audit");
  audit_cmd->add_flag("--write", audit_write, "also write audit_<kind>.txt/.csv into --out");

  Overrides run_o;
  bool overwrite = false;
  auto* run = app.add_subcommand("run", "full group-aware benchmark over seeds x modes x models");
  add_overrides(run, run_o, true);
  run->add_flag("--overwrite", overwrite, "replace results from a previous run");

  std::string results_dir, agg_out;
  auto* aggregate = app.add_subcommand("aggregate", "mean and std per (model, mode, metric)");
  aggregate->add_option("results", results_dir, "directory holding results*.csv")->required();
  aggregate->add_option("--out", agg_out, "output file (default: <results>/aggregate.csv)");

  std::string agg_file, report_dir;
  auto* report = app.add_subcommand("report", "one SVG bar chart per metric");
  report->add_option("aggregate", agg_file, "aggregate CSV")->required();
  report->add_option("--out", report_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(raw, synth, ingest_config, base, manifest, ingest_out, out);
    if (audit_cmd->parsed()) return cmd_audit(audit_kind, audit_o, pairs, model, audit_write, out);
    if (run->parsed()) return cmd_run(run_o, overwrite, out, err);
    if (aggregate->parsed()) return cmd_aggregate(results_dir, agg_out, out);
    if (report->parsed()) return cmd_report(agg_file, report_dir, out);
  } catch (const ProtocolError& e) {
    err << "error: " << e.what() << '\n';
    return kAllDegenerate;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace uavbench::cli
