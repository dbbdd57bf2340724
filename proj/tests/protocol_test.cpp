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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "uavbench/ingest/synth.hpp"
#include "uavbench/protocol/runner.hpp"

using namespace uavbench;
using namespace uavbench::protocol;

namespace {

ingest::TelemetryTable small_table(std::uint64_t seed = 0, std::size_t n = 900) {
  auto spec = ingest::SynthSpec::proxy_heavy(seed);
  spec.n_rows = n;
  return ingest::synth_generate(spec);
}

PipelineConfig fast_config() {
  PipelineConfig cfg;
  cfg.classical.gbdt.n_trees = 20;
  cfg.classical.forest.n_trees = 10;
  cfg.classical.mlp.epochs = 20;
  cfg.dru_budget.max_optimizer_evals = 40;
  cfg.dru_budget.max_per_class = 40;
  cfg.ab_max_per_class = 40;
  return cfg;
}

}  // namespace

TEST(Blocks, RemainderRule) {
  const auto b = make_blocks(10, 3);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].size(), 4u);
  EXPECT_EQ(b[1].size(), 3u);
  EXPECT_EQ(b[2].size(), 3u);
  const auto big = make_blocks(4817, 10);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(big[i].size(), i < 7 ? 482u : 481u);
  EXPECT_EQ(big.back().end, 4817u);
  const auto twenty = make_blocks(4817, 20);
  EXPECT_EQ(twenty.size(), 20u);
  EXPECT_THROW(make_blocks(10, 1), InvalidArgument);
  EXPECT_THROW(make_blocks(10, 11), InvalidArgument);
}

TEST(Blocks, PartitionContiguously) {
  for (std::size_t n : {5u, 17u, 100u, 4817u}) {
    for (std::size_t k = 2; k <= std::min<std::size_t>(n, 25); ++k) {
      const auto b = make_blocks(n, k);
      std::size_t at = 0;
      for (std::size_t i = 0; i < k; ++i) {
        EXPECT_EQ(b[i].id, i);
        EXPECT_EQ(b[i].begin, at);
        EXPECT_GE(b[i].size(), n / k);
        EXPECT_LE(b[i].size(), n / k + 1);
        at = b[i].end;
      }
      EXPECT_EQ(at, n);
    }
  }
}

TEST(SplitBlocks, CountsFollowTheRoundingRule) {
  for (std::size_t k = 3; k <= 30; ++k) {
    const long r = std::lround(0.7 * static_cast<double>(k));
    const std::size_t train = std::min<std::size_t>(static_cast<std::size_t>(r), k - 2);
    const std::size_t m = k - train;
    const std::size_t val = std::max<std::size_t>(1, m / 2);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto plan = split_blocks(make_blocks(100, k), seed);
      EXPECT_EQ(plan.blocks_in(Split::train).size(), train) << "K=" << k;
      EXPECT_EQ(plan.blocks_in(Split::validation).size(), val) << "K=" << k;
      EXPECT_EQ(plan.blocks_in(Split::test).size(), m - val) << "K=" << k;
    }
  }
  const auto ten = split_blocks(make_blocks(4817, 10), 0);
  EXPECT_EQ(ten.blocks_in(Split::train).size(), 7u);
  EXPECT_EQ(ten.blocks_in(Split::validation).size() + ten.blocks_in(Split::test).size(), 3u);
}

TEST(SplitBlocks, DeterministicDisjointAndSeedOnlyMovesAssignment) {
  const auto blocks = make_blocks(4817, 10);
  std::set<std::vector<Split>> distinct;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto plan = split_blocks(blocks, seed);
    EXPECT_EQ(split_blocks(blocks, seed).assignment, plan.assignment);
    EXPECT_EQ(plan.blocks, blocks);
    distinct.insert(plan.assignment);
    std::vector<int> owner(4817, 0);
    for (auto s : {Split::train, Split::validation, Split::test}) {
      for (auto r : plan.rows(s)) ++owner[r];
    }
    EXPECT_TRUE(std::all_of(owner.begin(), owner.end(), [](int c) { return c == 1; }));
  }
  EXPECT_GT(distinct.size(), 40u);
}

TEST(SplitBlocks, SingleClassTrainNamesTheSeed) {
  // Only the last block holds anomalies; find a seed that leaves it out of train.
  std::vector<int> y(100, 0);
  for (std::size_t i = 90; i < 100; ++i) y[i] = 1;
  const auto blocks = make_blocks(100, 10);
  int raised = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto plan = split_blocks(blocks, seed);
    if (plan.assignment[9] == Split::train) {
      EXPECT_NO_THROW(split_blocks(blocks, seed, y));
      continue;
    }
    try {
      split_blocks(blocks, seed, y);
      ADD_FAILURE() << "expected a protocol error";
    } catch (const ProtocolError& e) {
      EXPECT_EQ(e.seed(), seed);
      EXPECT_NE(std::string(e.what()).find("seed " + std::to_string(seed)), std::string::npos);
      ++raised;
    }
  }
  EXPECT_GT(raised, 0);
}

TEST(ShuffledSplit, PartitionsRows) {
  const auto s = shuffled_row_split(1000, 4);
  EXPECT_EQ(s.train.size(), 700u);
  EXPECT_EQ(s.validation.size(), 150u);
  EXPECT_EQ(s.test.size(), 150u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.validation.begin(), s.validation.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 1000u);
}

TEST(PrepareFold, SyntheticRowsStayInTrainingFold) {
  const auto t = small_table(1);
  const auto cfg = fast_config();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto split = split_blocks(make_blocks(t.rows(), 10), seed, t.binary_labels()).row_split();
    for (auto mode : audit::kAllModes) {
      const auto p = prepare_fold(t, split, mode, cfg, seed);
      std::size_t real = 0;
      for (std::size_t i = 0; i < p.fold.X.rows(); ++i) {
        if (p.fold.origin[i] == preprocess::Origin::real) {
          ++real;
          ASSERT_LT(p.fold.source[i], split.train.size());
        }
      }
      EXPECT_LE(real, split.train.size());
      EXPECT_EQ(p.xq_val.rows(), split.validation.size());
      EXPECT_EQ(p.xq_test.rows(), split.test.size());
      EXPECT_EQ(p.xq_train.rows(), p.fold.X.rows());
      EXPECT_EQ(p.selected.size(), 5u);
    }
  }
}

TEST(PrepareFold, FittedStateIgnoresEvaluationRows) {
  const auto t = small_table(2);
  const auto cfg = fast_config();
  const auto split = split_blocks(make_blocks(t.rows(), 10), 3, t.binary_labels()).row_split();
  // Shuffle the rows inside validation and test, and overwrite their values.
  auto perturbed = t;
  Rng rng(8);
  for (const auto* rows : {&split.validation, &split.test}) {
    IndexList shuffled = *rows;
    rng.shuffle(std::span<std::size_t>(shuffled));
    for (std::size_t i = 0; i < rows->size(); ++i) {
      const auto src = t.features.row(shuffled[i]);
      std::copy(src.begin(), src.end(), perturbed.features.row((*rows)[i]).begin());
      perturbed.label[(*rows)[i]] = t.label[shuffled[i]];
    }
  }
  for (auto mode : audit::kAllModes) {
    const auto a = prepare_fold(t, split, mode, cfg, 3);
    const auto b = prepare_fold(perturbed, split, mode, cfg, 3);
    EXPECT_EQ(a.robust.median, b.robust.median);
    EXPECT_EQ(a.robust.iqr, b.robust.iqr);
    EXPECT_EQ(a.fold.X, b.fold.X);
    EXPECT_EQ(a.ranking.mi, b.ranking.mi);
    EXPECT_EQ(a.selected, b.selected);
    EXPECT_EQ(a.angle.min, b.angle.min);
    EXPECT_EQ(a.angle.max, b.angle.max);
    EXPECT_EQ(a.xq_train, b.xq_train);
  }
}

TEST(RunSeed, OneRecordPerModelWithPriors) {
  const auto t = prepare_table(small_table(3), fast_config());
  const auto res = run_seed(t, 0, audit::FeatureMode::strict, fast_config());
  ASSERT_EQ(res.records.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    const auto& r = res.records[i];
    EXPECT_EQ(r.model, name(kAllModels[i]));
    EXPECT_EQ(r.mode, "strict");
    EXPECT_EQ(r.n_train + r.n_val + r.n_test, t.rows());
    EXPECT_GE(r.prior_train, 0.0);
    EXPECT_LE(r.prior_test, 1.0);
    EXPECT_FALSE(std::isnan(r.f1_macro)) << r.model << " " << res.timings[i].status;
  }
  EXPECT_EQ(res.diag.hybrid_inputs.size(), 6u);
  for (const auto& h : res.diag.hybrid_inputs) {
    EXPECT_EQ(h.x_fingerprint, res.diag.hybrid_inputs[0].x_fingerprint);
    EXPECT_EQ(h.b_fingerprint, res.diag.hybrid_inputs[0].b_fingerprint);
    EXPECT_EQ(h.head, res.diag.hybrid_inputs[0].head);
  }
  EXPECT_GT(res.diag.dru_feature_gap, 0.0);
}

TEST(RunSeed, DegenerateSeedGivesBlankRecords) {
  auto t = small_table(0, 300);
  std::fill(t.label.begin(), t.label.end(), 0);
  for (std::size_t i = 280; i < 300; ++i) t.label[i] = 3;
  auto cfg = fast_config();
  cfg.models = {ModelId::logreg, ModelId::xgboost};
  std::size_t degenerate = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto res = run_seed(t, seed, audit::FeatureMode::full, cfg);
    ASSERT_EQ(res.records.size(), 2u);
    if (res.diag.status.rfind("degenerate", 0) == 0) {
      ++degenerate;
      EXPECT_TRUE(std::isnan(res.records[0].f1_macro));
      EXPECT_NE(res.diag.status.find("seed " + std::to_string(seed)), std::string::npos);
    }
  }
  EXPECT_GT(degenerate, 0u);
}

TEST(RunExperiment, ThreadCountDoesNotChangeResults) {
  const auto t = small_table(4);
  auto cfg = fast_config();
  cfg.models = {ModelId::logreg, ModelId::xgboost, ModelId::xgb_raw};
  const std::vector<std::uint64_t> seeds{2, 0, 1};
  const auto modes = audit::kAllModes;
  const auto one = run_experiment(t, seeds, modes, cfg, 1);
  const auto three = run_experiment(t, seeds, modes, cfg, 3);
  EXPECT_EQ(one.records, three.records);
  EXPECT_EQ(one.records.size(), 27u);
  EXPECT_TRUE(std::is_sorted(one.records.begin(), one.records.end(), metrics::record_less));
  EXPECT_EQ(one.log.size(), 27u);
  EXPECT_EQ(one.diagnostics.size(), 9u);
}

TEST(RunExperiment, FaultThreeVariantUsesLabelFilterAndTwentyBlocks) {
  auto cfg = fast_config();
  cfg.k_blocks = 20;
  cfg.label_filter = {0, 3};
  cfg.models = {ModelId::xgboost};
  const std::vector<std::uint64_t> seeds{0, 1};
  const std::array<audit::FeatureMode, 1> modes{audit::FeatureMode::strict};
  const auto t = small_table(5, 2000);
  const auto res = run_experiment(t, seeds, modes, cfg, 1);
  ASSERT_EQ(res.records.size(), 2u);
  const auto kept = static_cast<std::size_t>(std::count_if(t.label.begin(), t.label.end(), [](int v) { return v == 0 || v == 3; }));
  for (const auto& r : res.records) {
    if (std::isnan(r.f1_macro)) continue;
    EXPECT_EQ(r.n_train + r.n_val + r.n_test, kept);
  }
  for (const auto& d : res.diagnostics) {
    if (d.status != "ok") continue;
    EXPECT_EQ(d.train_blocks.size() + d.validation_blocks.size() + d.test_blocks.size(), 20u);
  }
}
