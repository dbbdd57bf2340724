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

// One isolated (seed, mode) pipeline:
//
//   mode columns -> robust scale (train fit) -> SMOTETomek (train only)
//   -> MI ranking on the balanced fold -> top-k -> angle scale (fold fit)
//   -> every requested model -> metrics on the test rows.
//
// Nothing is fitted on validation or test rows except the DRU decision
// threshold, which is tuned on validation.

#include <algorithm>
#include <array>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavbench/audit/modes.hpp"
#include "uavbench/core/error.hpp"
#include "uavbench/core/matrix.hpp"
#include "uavbench/dru/dru.hpp"
#include "uavbench/hybrid/transforms.hpp"
#include "uavbench/ingest/table.hpp"
#include "uavbench/metrics/metrics.hpp"
#include "uavbench/models/classifiers.hpp"
#include "uavbench/preprocess/mutual_info.hpp"
#include "uavbench/preprocess/scalers.hpp"
#include "uavbench/preprocess/smote_tomek.hpp"
#include "uavbench/protocol/blocks.hpp"

namespace uavbench::protocol {

using metrics::MetricsRecord;

enum class ModelId {
  logreg,
  mlp,
  random_forest,
  xgboost,
  dru,
  xgb_raw,
  xgb_pca,
  xgb_poly2,
  xgb_random_rbf,
  xgb_dru_untrained,
  xgb_dru_trained,
  physical_oracle,
};

inline constexpr std::array<ModelId, 12> kAllModels = {
    ModelId::logreg,  ModelId::mlp,       ModelId::random_forest,  ModelId::xgboost,
    ModelId::dru,     ModelId::xgb_raw,   ModelId::xgb_pca,        ModelId::xgb_poly2,
    ModelId::xgb_random_rbf, ModelId::xgb_dru_untrained, ModelId::xgb_dru_trained, ModelId::physical_oracle};

inline std::string_view name(ModelId m) {
  switch (m) {
    case ModelId::logreg: return "logreg";
    case ModelId::mlp: return "mlp";
    case ModelId::random_forest: return "random_forest";
    case ModelId::xgboost: return "xgboost";
    case ModelId::dru: return "dru";
    case ModelId::xgb_raw: return "xgb_raw";
    case ModelId::xgb_pca: return "xgb_pca";
    case ModelId::xgb_poly2: return "xgb_poly2";
    case ModelId::xgb_random_rbf: return "xgb_random_rbf";
    case ModelId::xgb_dru_untrained: return "xgb_dru_untrained";
    case ModelId::xgb_dru_trained: return "xgb_dru_trained";
    case ModelId::physical_oracle: return "physical_oracle";
  }
  return "?";
}

inline ModelId parse_model(std::string_view s) {
  for (auto m : kAllModels) {
    if (name(m) == s) return m;
  }
  throw InvalidArgument("unknown model '" + std::string(s) + "'");
}

inline std::optional<hybrid::TransformKind> hybrid_kind(ModelId m) {
  switch (m) {
    case ModelId::xgb_raw: return hybrid::TransformKind::raw;
    case ModelId::xgb_pca: return hybrid::TransformKind::pca;
    case ModelId::xgb_poly2: return hybrid::TransformKind::poly2;
    case ModelId::xgb_random_rbf: return hybrid::TransformKind::random_rbf;
    case ModelId::xgb_dru_untrained: return hybrid::TransformKind::dru_untrained;
    case ModelId::xgb_dru_trained: return hybrid::TransformKind::dru_trained;
    default: return std::nullopt;
  }
}

struct PipelineConfig {
  std::size_t k_blocks = 10;
  std::size_t top_k = 5;
  int smote_k = 5;
  int ab_max_per_class = 400;
  models::ClassicalConfig classical;
  dru::DruSpec dru_spec;
  dru::TrainBudget dru_budget;
  audit::ModeDefinition modes = audit::ModeDefinition::builtin();
  std::vector<ModelId> models{kAllModels.begin(), kAllModels.end()};
  /// Keep only these multiclass labels before anything else (empty = all).
  std::vector<int> label_filter;
};

/// Everything fitted for one split, before any model is trained.
struct PreparedFold {
  IndexList mode_columns;
  preprocess::RobustScaler robust;
  preprocess::BalancedFold fold;  // robust-scaled, all mode columns
  preprocess::SmoteTomekStats smote_stats;
  preprocess::FeatureRanking ranking;
  IndexList selected;  // indices into mode_columns
  preprocess::AngleScaler angle;
  Matrix xq_train, xq_val, xq_test;  // selected + angle-scaled
  Labels y_val, y_test;
  std::size_t n_train_real = 0;
  double prior_train = metrics::kMissing;
  double prior_test = metrics::kMissing;
};

inline Labels labels_at(std::span<const int> y, const IndexList& rows) { return select(y, std::span<const std::size_t>(rows)); }

inline PreparedFold prepare_fold(const ingest::TelemetryTable& table, const RowSplit& split, audit::FeatureMode mode,
                                 const PipelineConfig& cfg, std::uint64_t seed) {
  PreparedFold p;
  const Labels y = table.binary_labels();
  p.mode_columns = audit::mode_columns(table.feature_names, mode, cfg.modes);
  if (cfg.top_k > p.mode_columns.size()) {
    throw InvalidArgument("top_k exceeds the " + std::string(audit::name(mode)) + " feature count");
  }
  const Matrix Xm = table.features.select_cols(p.mode_columns);
  const Matrix tr = Xm.select_rows(split.train);
  const Labels ytr = labels_at(y, split.train);
  p.n_train_real = tr.rows();
  p.prior_train = metrics::positive_rate(ytr);
  p.y_val = labels_at(y, split.validation);
  p.y_test = labels_at(y, split.test);
  p.prior_test = metrics::positive_rate(p.y_test);
  if (std::count(ytr.begin(), ytr.end(), 1) == 0 || std::count(ytr.begin(), ytr.end(), 0) == 0) {
    throw ProtocolError(seed, "degenerate split: training rows hold a single class");
  }

  p.robust = preprocess::RobustScaler::fit(tr);
  try {
    p.fold = preprocess::smote_tomek(p.robust.transform(tr), ytr, {cfg.smote_k, derive_seed(seed, "smote")}, &p.smote_stats);
    p.ranking = preprocess::mi_rank(p.fold);
  } catch (const InvalidArgument& e) {
    throw ProtocolError(seed, std::string("degenerate training fold: ") + e.what());
  }
  p.selected = preprocess::select_top_k(p.ranking, cfg.top_k);
  const Matrix sel_train = p.fold.X.select_cols(p.selected);
  p.angle = preprocess::AngleScaler::fit(sel_train);
  p.xq_train = p.angle.transform(sel_train);
  auto eval = [&](const IndexList& rows) {
    return p.angle.transform(p.robust.transform(Xm.select_rows(rows)).select_cols(p.selected));
  };
  p.xq_val = eval(split.validation);
  p.xq_test = eval(split.test);
  return p;
}

/// Per-(seed, mode) facts the audits and acceptance checks need.
struct SeedDiagnostics {
  std::uint64_t seed = 0;
  std::string mode;
  std::string status = "ok";
  std::vector<std::string> selected_features;
  std::vector<std::string> physical_features;
  std::size_t synthetic_rows = 0;
  std::size_t tomek_links = 0;
  std::uint64_t xq_fingerprint = 0;
  std::uint64_t b_fingerprint = 0;
  std::vector<std::size_t> train_blocks, validation_blocks, test_blocks;
  /// One entry per hybrid variant that ran.
  struct HybridInput {
    std::string model;
    std::uint64_t x_fingerprint = 0;
    std::uint64_t b_fingerprint = 0;
    models::GbdtConfig head;
    std::size_t concat_width = 0;
  };
  std::vector<HybridInput> hybrid_inputs;
  double dru_feature_gap = metrics::kMissing;
};

struct ModelTiming {
  std::string model;
  std::string status;
  double seconds = 0.0;
};

struct SeedResult {
  std::vector<MetricsRecord> records;
  std::vector<ModelTiming> timings;
  SeedDiagnostics diag;
};

namespace detail {

inline MetricsRecord blank_record(std::uint64_t seed, std::string_view mode, ModelId m) {
  MetricsRecord r;
  r.seed = seed;
  r.mode = std::string(mode);
  r.model = std::string(name(m));
  return r;
}

inline std::uint64_t index_fingerprint(const IndexList& idx) {
  Matrix m(idx.size(), 1);
  for (std::size_t i = 0; i < idx.size(); ++i) m(i, 0) = static_cast<double>(idx[i]);
  return fingerprint(m);
}

}  // namespace detail

/// Trains and scores every requested model on an explicit row split.
/// Split-level failures raise ProtocolError; a failing model only blanks
/// its own record.
inline SeedResult evaluate_split(const ingest::TelemetryTable& table, const RowSplit& split, std::uint64_t seed,
                                 audit::FeatureMode mode, const PipelineConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const std::string mode_name(audit::name(mode));
  SeedResult out;
  out.diag.seed = seed;
  out.diag.mode = mode_name;

  const PreparedFold p = prepare_fold(table, split, mode, cfg, seed);
  const auto& fold = p.fold;
  for (auto s : p.selected) out.diag.selected_features.push_back(table.feature_names[p.mode_columns[s]]);
  out.diag.synthetic_rows = p.smote_stats.synthetic;
  out.diag.tomek_links = p.smote_stats.tomek_links;
  out.diag.xq_fingerprint = fingerprint(p.xq_train);

  const auto classical = cfg.classical.with_seed(seed);
  const bool wants_dru = std::any_of(cfg.models.begin(), cfg.models.end(), [](ModelId m) {
    return m == ModelId::dru || (hybrid_kind(m) && *hybrid_kind(m) == hybrid::TransformKind::dru_trained);
  });
  const bool wants_hybrid = std::any_of(cfg.models.begin(), cfg.models.end(), [](ModelId m) { return hybrid_kind(m).has_value(); });

  std::optional<hybrid::AbSplit> ab;
  std::optional<dru::DruModel> trained_dru;
  std::optional<std::array<hybrid::HybridTransform, 6>> family;
  Matrix xb;
  Labels yb;
  if (wants_dru || wants_hybrid) {
    ab = hybrid::split_ab(fold.y, seed, cfg.ab_max_per_class);
    xb = p.xq_train.select_rows(ab->b);
    yb = labels_at(fold.y, ab->b);
    out.diag.b_fingerprint = detail::index_fingerprint(ab->b);
  }

  auto record = [&](ModelId m, const Scores& scores, double threshold) {
    MetricsRecord r = detail::blank_record(seed, mode_name, m);
    r.n_train = p.n_train_real;
    r.n_val = split.validation.size();
    r.n_test = split.test.size();
    r.prior_train = p.prior_train;
    r.prior_test = p.prior_test;
    metrics::score_into(r, p.y_test, scores, threshold);
    return r;
  };

  for (ModelId m : cfg.models) {
    const auto t0 = clock::now();
    std::string status = "ok";
    try {
      switch (m) {
        case ModelId::logreg:
        case ModelId::mlp:
        case ModelId::random_forest:
        case ModelId::xgboost: {
          const auto kind = m == ModelId::logreg          ? models::ClassicalKind::logreg
                            : m == ModelId::mlp           ? models::ClassicalKind::mlp
                            : m == ModelId::random_forest ? models::ClassicalKind::random_forest
                                                          : models::ClassicalKind::gbdt;
          out.records.push_back(record(m, models::fit_predict(kind, classical, p.xq_train, fold.y, p.xq_test), 0.5));
          break;
        }
        case ModelId::dru: {
          if (!trained_dru) {
            dru::DruSpec spec = cfg.dru_spec;
            spec.n_qubits = static_cast<int>(cfg.top_k);
            spec.seed = derive_seed(seed, "dru");
            trained_dru = dru::fit(spec, p.xq_train.select_rows(ab->a), labels_at(fold.y, ab->a), cfg.dru_budget);
          }
          dru::DruModel tuned = *trained_dru;
          tuned.threshold = dru::tune_threshold(tuned, p.xq_val, p.y_val);
          out.records.push_back(record(m, dru::score_rows(tuned, p.xq_test), tuned.threshold));
          break;
        }
        case ModelId::physical_oracle: {
          IndexList phys_cols;  // positions within mode_columns
          for (std::size_t j = 0; j < p.mode_columns.size(); ++j) {
            const auto& n = table.feature_names[p.mode_columns[j]];
            if (std::find(cfg.modes.strict_keep.begin(), cfg.modes.strict_keep.end(), n) != cfg.modes.strict_keep.end()) {
              phys_cols.push_back(j);
            }
          }
          const Matrix phys_fold = fold.X.select_cols(phys_cols);
          const auto top = preprocess::select_top_k(preprocess::mi_rank(phys_fold, fold.y),
                                                    std::min(cfg.top_k, phys_cols.size()));
          IndexList cols;
          for (auto t : top) {
            cols.push_back(phys_cols[t]);
            out.diag.physical_features.push_back(table.feature_names[p.mode_columns[phys_cols[t]]]);
          }
          const Matrix test = p.robust.transform(table.features.select_cols(p.mode_columns).select_rows(split.test));
          out.records.push_back(record(m, models::fit_predict(models::ClassicalKind::gbdt, classical, fold.X.select_cols(cols),
                                                              fold.y, test.select_cols(cols)),
                                       0.5));
          break;
        }
        default: {
          if (!family) {
            hybrid::FamilyOptions fo;
            fo.dru_spec = cfg.dru_spec;
            fo.dru_spec.n_qubits = static_cast<int>(cfg.top_k);
            fo.dru_budget = cfg.dru_budget;
            fo.trained_dru = trained_dru;
            family = hybrid::fit_transform_family(p.xq_train, fold.y, *ab, seed, fo);
            if (!trained_dru) trained_dru = *(*family)[5].dru_model();
            const auto u = (*family)[4].apply(p.xq_test);
            const auto t = (*family)[5].apply(p.xq_test);
            double gap = 0.0;
            for (std::size_t i = 0; i < u.data().size(); ++i) gap += std::abs(u.data()[i] - t.data()[i]);
            out.diag.dru_feature_gap = u.data().empty() ? 0.0 : gap / static_cast<double>(u.data().size());
          }
          const auto kind = *hybrid_kind(m);
          const auto& tf = (*family)[static_cast<std::size_t>(kind)];
          out.diag.hybrid_inputs.push_back(
              {std::string(name(m)), fingerprint(xb), out.diag.b_fingerprint, classical.gbdt, xb.cols() + tf.output_dim()});
          out.records.push_back(record(m, hybrid::hybrid_fit_predict(tf, classical.gbdt, xb, yb, p.xq_test), 0.5));
          break;
        }
      }
    } catch (const Error& e) {
      status = std::string("failed: ") + e.what();
      MetricsRecord r = detail::blank_record(seed, mode_name, m);
      r.n_train = p.n_train_real;
      r.n_val = split.validation.size();
      r.n_test = split.test.size();
      r.prior_train = p.prior_train;
      r.prior_test = p.prior_test;
      out.records.push_back(r);
    }
    out.timings.push_back({std::string(name(m)), status, std::chrono::duration<double>(clock::now() - t0).count()});
  }
  return out;
}

/// Applies the configured label filter and sorts by TimeUS.
inline ingest::TelemetryTable prepare_table(const ingest::TelemetryTable& table, const PipelineConfig& cfg) {
  ingest::TelemetryTable t = cfg.label_filter.empty() ? table : table.filter_labels(cfg.label_filter);
  t.sort_by_time();
  if (t.rows() == 0) throw DataError("no rows left after the label filter");
  return t;
}

/// The B2 pipeline for one (seed, mode).  `table` must already be prepared
/// (filtered and time-sorted).  A degenerate seed yields one blank record
/// per model and status "degenerate: ...".
inline SeedResult run_seed(const ingest::TelemetryTable& table, std::uint64_t seed, audit::FeatureMode mode,
                           const PipelineConfig& cfg) {
  const auto y = table.binary_labels();
  const auto blocks = make_blocks(table.rows(), cfg.k_blocks);
  try {
    const auto plan = split_blocks(blocks, seed, y);
    auto res = evaluate_split(table, plan.row_split(), seed, mode, cfg);
    res.diag.train_blocks = plan.blocks_in(Split::train);
    res.diag.validation_blocks = plan.blocks_in(Split::validation);
    res.diag.test_blocks = plan.blocks_in(Split::test);
    return res;
  } catch (const ProtocolError& e) {
    SeedResult res;
    res.diag.seed = seed;
    res.diag.mode = std::string(audit::name(mode));
    res.diag.status = std::string("degenerate: ") + e.what();
    for (ModelId m : cfg.models) {
      res.records.push_back(detail::blank_record(seed, res.diag.mode, m));
      res.timings.push_back({std::string(name(m)), res.diag.status, 0.0});
    }
    return res;
  }
}

}  // namespace uavbench::protocol
