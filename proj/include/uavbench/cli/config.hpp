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

// Run configuration.  Every field has a default; a TOML file overrides any
// subset of them and command-line flags override the file.  Unknown
// sections or keys are rejected so typos cannot silently fall back to a
// default.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "uavbench/audit/modes.hpp"
#include "uavbench/cli/toml.hpp"
#include "uavbench/ingest/synth.hpp"
#include "uavbench/protocol/pipeline.hpp"

namespace uavbench::cli {

struct RunConfig {
  // [data]  Exactly one source is used: table, else raw_dir, else synth.
  std::string table;
  std::string raw_dir;
  std::string base_stream;
  std::string checksums;
  ingest::SynthSpec synth;

  // [protocol]
  std::size_t k = 10;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<audit::FeatureMode> modes{audit::kAllModes.begin(), audit::kAllModes.end()};
  std::size_t top_k = 5;
  std::vector<int> label_filter;
  std::string strict_features;  // empty: the shipped list

  // [models]
  std::vector<protocol::ModelId> models{protocol::kAllModels.begin(), protocol::kAllModels.end()};

  // [dru], [gbdt], [forest], [mlp], [logreg], [preprocess]
  dru::DruSpec dru_spec;
  dru::TrainBudget dru_budget;
  models::ClassicalConfig classical;
  int smote_k = 5;
  int ab_max_per_class = 400;

  // [run]
  std::string out = "results";
  std::size_t jobs = 0;  // 0: one per core

  protocol::PipelineConfig pipeline() const {
    protocol::PipelineConfig p;
    p.k_blocks = k;
    p.top_k = top_k;
    p.smote_k = smote_k;
    p.ab_max_per_class = ab_max_per_class;
    p.classical = classical;
    p.dru_spec = dru_spec;
    p.dru_budget = dru_budget;
    p.modes = strict_features.empty() ? audit::ModeDefinition::builtin()
                                      : audit::ModeDefinition::from_file(strict_features);
    p.models = models;
    p.label_filter = label_filter;
    return p;
  }

  void validate() const {
    if (k < 3) throw InvalidArgument("k must be at least 3");
    if (seeds.empty()) throw InvalidArgument("seeds must not be empty");
    if (modes.empty()) throw InvalidArgument("modes must not be empty");
    if (models.empty()) throw InvalidArgument("model set must not be empty");
    if (top_k == 0) throw InvalidArgument("top_k must be positive");
    for (int l : label_filter) {
      if (l < 0 || l > 4) throw InvalidArgument("label filter values must be in 0..4");
    }
    dru_spec.validate();
    classical.gbdt.validate();
    synth.validate();
  }
};

namespace detail {

class Reader {
 public:
  explicit Reader(const toml::Document& doc) : doc_(doc) {}

  const toml::Value* get(const std::string& section, const std::string& key) {
    used_.insert(section + "." + key);
    const auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  template <typename F>
  void with(const std::string& section, const std::string& key, F&& f) {
    if (const auto* v = get(section, key)) f(*v, section + "." + key);
  }

  void reject_unknown() const {
    for (const auto& [section, keys] : doc_) {
      for (const auto& [key, v] : keys) {
        if (!used_.count(section + "." + key)) {
          throw InvalidArgument("unknown config key '" + (section.empty() ? key : section + "." + key) + "'");
        }
      }
    }
  }

 private:
  const toml::Document& doc_;
  std::set<std::string> used_;
};

inline std::size_t non_negative(const toml::Value& v, const std::string& key) {
  const auto x = v.as_int(key);
  if (x < 0) throw InvalidArgument("config key '" + key + "' must be >= 0");
  return static_cast<std::size_t>(x);
}

inline int as_int32(const toml::Value& v, const std::string& key) { return static_cast<int>(v.as_int(key)); }

}  // namespace detail

/// Relative paths in the file are resolved against the file's directory.
inline RunConfig parse_run_config(const toml::Document& doc, const std::filesystem::path& base_dir = {}) {
  RunConfig c;
  detail::Reader r(doc);
  auto path = [&](const toml::Value& v, const std::string& key) {
    const auto& s = v.as_string(key);
    if (s.empty()) return s;
    const std::filesystem::path p(s);
    return p.is_absolute() || base_dir.empty() ? s : (base_dir / p).string();
  };
  using V = toml::Value;
  using S = std::string;

  r.with("data", "table", [&](const V& v, const S& k) { c.table = path(v, k); });
  r.with("data", "raw_dir", [&](const V& v, const S& k) { c.raw_dir = path(v, k); });
  r.with("data", "base_stream", [&](const V& v, const S& k) { c.base_stream = v.as_string(k); });
  r.with("data", "checksums", [&](const V& v, const S& k) { c.checksums = path(v, k); });

  r.with("synth", "n_rows", [&](const V& v, const S& k) { c.synth.n_rows = detail::non_negative(v, k); });
  r.with("synth", "episodes", [&](const V& v, const S& k) { c.synth.n_episodes = detail::as_int32(v, k); });
  r.with("synth", "segments_per_episode", [&](const V& v, const S& k) { c.synth.segments_per_episode = detail::as_int32(v, k); });
  r.with("synth", "physical_strength", [&](const V& v, const S& k) { c.synth.physical_strength = v.as_double(k); });
  r.with("synth", "proxy_strength", [&](const V& v, const S& k) { c.synth.proxy_strength = v.as_double(k); });
  r.with("synth", "proxy_label_coupling", [&](const V& v, const S& k) { c.synth.proxy_label_coupling = v.as_double(k); });
  r.with("synth", "temporal", [&](const V& v, const S& k) { c.synth.temporal = v.as_bool(k); });
  r.with("synth", "seed", [&](const V& v, const S& k) { c.synth.seed = detail::non_negative(v, k); });

  r.with("protocol", "k", [&](const V& v, const S& k) { c.k = detail::non_negative(v, k); });
  r.with("protocol", "seeds", [&](const V& v, const S& k) {
    c.seeds.clear();
    for (const auto& e : v.as_array(k)) c.seeds.push_back(detail::non_negative(e, k));
  });
  r.with("protocol", "modes", [&](const V& v, const S& k) {
    c.modes.clear();
    for (const auto& e : v.as_array(k)) c.modes.push_back(audit::parse_mode(e.as_string(k)));
  });
  r.with("protocol", "top_k", [&](const V& v, const S& k) { c.top_k = detail::non_negative(v, k); });
  r.with("protocol", "label_filter", [&](const V& v, const S& k) {
    c.label_filter.clear();
    for (const auto& e : v.as_array(k)) c.label_filter.push_back(detail::as_int32(e, k));
  });
  r.with("protocol", "strict_features", [&](const V& v, const S& k) { c.strict_features = path(v, k); });

  r.with("models", "set", [&](const V& v, const S& k) {
    c.models.clear();
    for (const auto& e : v.as_array(k)) c.models.push_back(protocol::parse_model(e.as_string(k)));
  });

  r.with("dru", "qubits", [&](const V& v, const S& k) { c.dru_spec.n_qubits = detail::as_int32(v, k); });
  r.with("dru", "layers", [&](const V& v, const S& k) { c.dru_spec.n_layers = detail::as_int32(v, k); });
  r.with("dru", "entanglement", [&](const V& v, const S& k) {
    const auto& e = v.as_string(k);
    if (e == "ring") {
      c.dru_spec.entanglement = dru::Entanglement::ring;
    } else if (e == "none") {
      c.dru_spec.entanglement = dru::Entanglement::none;
    } else {
      throw InvalidArgument("dru.entanglement must be \"ring\" or \"none\"");
    }
  });
  r.with("dru", "max_per_class", [&](const V& v, const S& k) { c.dru_budget.max_per_class = detail::as_int32(v, k); });
  r.with("dru", "max_evals", [&](const V& v, const S& k) { c.dru_budget.max_optimizer_evals = detail::as_int32(v, k); });
  r.with("dru", "rho_begin", [&](const V& v, const S& k) { c.dru_budget.rho_begin = v.as_double(k); });

  r.with("gbdt", "n_trees", [&](const V& v, const S& k) { c.classical.gbdt.n_trees = detail::as_int32(v, k); });
  r.with("gbdt", "max_depth", [&](const V& v, const S& k) { c.classical.gbdt.max_depth = detail::as_int32(v, k); });
  r.with("gbdt", "learning_rate", [&](const V& v, const S& k) { c.classical.gbdt.learning_rate = v.as_double(k); });
  r.with("gbdt", "min_samples_leaf", [&](const V& v, const S& k) { c.classical.gbdt.min_samples_leaf = detail::as_int32(v, k); });

  r.with("forest", "n_trees", [&](const V& v, const S& k) { c.classical.forest.n_trees = detail::as_int32(v, k); });
  r.with("forest", "max_depth", [&](const V& v, const S& k) { c.classical.forest.max_depth = detail::as_int32(v, k); });
  r.with("forest", "max_features", [&](const V& v, const S& k) { c.classical.forest.max_features = detail::non_negative(v, k); });
  r.with("forest", "bootstrap", [&](const V& v, const S& k) { c.classical.forest.bootstrap = v.as_bool(k); });
  r.with("forest", "min_samples_leaf", [&](const V& v, const S& k) { c.classical.forest.min_samples_leaf = detail::non_negative(v, k); });

  r.with("mlp", "hidden", [&](const V& v, const S& k) { c.classical.mlp.hidden = detail::as_int32(v, k); });
  r.with("mlp", "learning_rate", [&](const V& v, const S& k) { c.classical.mlp.learning_rate = v.as_double(k); });
  r.with("mlp", "epochs", [&](const V& v, const S& k) { c.classical.mlp.epochs = detail::as_int32(v, k); });

  r.with("logreg", "l2", [&](const V& v, const S& k) { c.classical.logreg.l2 = v.as_double(k); });
  r.with("logreg", "tolerance", [&](const V& v, const S& k) { c.classical.logreg.tolerance = v.as_double(k); });
  r.with("logreg", "max_iter", [&](const V& v, const S& k) { c.classical.logreg.max_iter = detail::as_int32(v, k); });

  r.with("preprocess", "smote_k", [&](const V& v, const S& k) { c.smote_k = detail::as_int32(v, k); });
  r.with("preprocess", "ab_max_per_class", [&](const V& v, const S& k) { c.ab_max_per_class = detail::as_int32(v, k); });

  r.with("run", "out", [&](const V& v, const S& k) { c.out = path(v, k); });
  r.with("run", "jobs", [&](const V& v, const S& k) { c.jobs = detail::non_negative(v, k); });

  r.reject_unknown();
  c.validate();
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open config file '" + file.string() + "'");
  return parse_run_config(toml::parse(in), file.parent_path());
}

/// "0-9", "0,2,5" or a mix such as "0-3,7".
inline std::vector<std::uint64_t> parse_seed_list(std::string_view s) {
  std::vector<std::uint64_t> out;
  for (const auto& part : text::split(s, ',')) {
    const auto t = text::trim(part);
    if (t.empty()) throw InvalidArgument("empty entry in seed list");
    const auto dash = t.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(static_cast<std::uint64_t>(text::parse_int(t)));
      continue;
    }
    const auto lo = text::parse_int(t.substr(0, dash)), hi = text::parse_int(t.substr(dash + 1));
    if (lo < 0 || hi < lo) throw InvalidArgument("bad seed range '" + std::string(t) + "'");
    for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

}  // namespace uavbench::cli
