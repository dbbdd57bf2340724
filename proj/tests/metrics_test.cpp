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

#include <cmath>
#include <sstream>

#include "support/metrics_oracle.hpp"
#include "uavbench/core/rng.hpp"
#include "uavbench/metrics/metrics.hpp"

using namespace uavbench;
using namespace uavbench::metrics;

TEST(F1Macro, HandExamples) {
  EXPECT_DOUBLE_EQ(f1_macro(Labels{0, 1, 1, 0}, Labels{0, 1, 1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(f1_macro(Labels{0, 0, 1, 1}, Labels{1, 1, 1, 1}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f1_macro(Labels{0, 1}, Labels{1, 0}), 0.0);
  EXPECT_THROW(f1_macro(Labels{}, Labels{}), InvalidArgument);
  EXPECT_THROW(f1_macro(Labels{0}, Labels{0, 1}), InvalidArgument);
}

TEST(RocAuc, HandExamples) {
  EXPECT_DOUBLE_EQ(roc_auc(Labels{0, 0, 1, 1}, Scores{0.1, 0.4, 0.35, 0.8}), 0.75);
  EXPECT_DOUBLE_EQ(roc_auc(Labels{0, 0, 1, 1}, Scores{0.3, 0.3, 0.3, 0.3}), 0.5);
  EXPECT_DOUBLE_EQ(roc_auc(Labels{0, 0, 1, 1}, Scores{0.1, 0.2, 0.3, 0.4}), 1.0);
  EXPECT_TRUE(is_missing(roc_auc(Labels{1, 1}, Scores{0.1, 0.2})));
}

TEST(FarNormal, HandExamples) {
  EXPECT_DOUBLE_EQ(far_normal(Labels{0, 0, 0, 1}, Labels{1, 0, 0, 1}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(far_normal(Labels{0, 0, 1}, Labels{0, 0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(far_normal(Labels{0, 0, 1}, Labels{1, 1, 1}), 1.0);
  EXPECT_TRUE(is_missing(far_normal(Labels{1, 1}, Labels{1, 0})));
}

TEST(BalancedAccuracyAndMcc, HandExamples) {
  const Labels y{0, 1, 0, 1, 1, 0};
  Labels inverted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) inverted[i] = 1 - y[i];
  EXPECT_DOUBLE_EQ(mcc(y, y), 1.0);
  EXPECT_DOUBLE_EQ(mcc(y, inverted), -1.0);
  EXPECT_DOUBLE_EQ(mcc(y, Labels(6, 1)), 0.0);
  EXPECT_DOUBLE_EQ(balanced_accuracy(y, y), 1.0);

  Rng rng(3);
  Labels truth, coin;
  for (int i = 0; i < 20000; ++i) {
    truth.push_back(i % 2);
    coin.push_back(rng.bernoulli(0.5) ? 1 : 0);
  }
  EXPECT_NEAR(balanced_accuracy(truth, coin), 0.5, 0.02);
}

TEST(Properties, MccSymmetricUnderLabelSwap) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    Labels y(15), h(15), ys(15), hs(15);
    for (std::size_t i = 0; i < 15; ++i) {
      y[i] = rng.bernoulli(0.4);
      h[i] = rng.bernoulli(0.5);
      ys[i] = 1 - y[i];
      hs[i] = 1 - h[i];
    }
    EXPECT_NEAR(mcc(y, h), mcc(ys, hs), 1e-12);
  }
}

TEST(Properties, AucComplementWithoutTies) {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    Labels y(20);
    Scores s(20), neg(20);
    for (std::size_t i = 0; i < 20; ++i) {
      y[i] = i < 7 ? 1 : 0;
      s[i] = rng.uniform();
      neg[i] = -s[i];
    }
    EXPECT_NEAR(roc_auc(y, s) + roc_auc(y, neg), 1.0, 1e-12);
  }
}

TEST(Oracle, ExhaustiveConfusionMetricsUpToLength10) {
  // Lengths 11 and 12 run in the acceptance suite; 10 keeps this fast.
  for (std::size_t n = 1; n <= 10; ++n) {
    const std::size_t combos = std::size_t{1} << (2 * n);
    Labels y(n), h(n);
    for (std::size_t code = 0; code < combos; ++code) {
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = static_cast<int>((code >> i) & 1U);
        h[i] = static_cast<int>((code >> (n + i)) & 1U);
      }
      const auto ref = oracle::brute_force_metrics(y, h);
      const auto c = confusion(y, h);
      ASSERT_NEAR(f1_macro(c), ref.f1_macro, 1e-12);
      ASSERT_NEAR(balanced_accuracy(c), ref.bal_acc, 1e-12);
      ASSERT_NEAR(mcc(c), ref.mcc, 1e-12);
      const double far = far_normal(c);
      ASSERT_EQ(is_missing(far), std::isnan(ref.far));
      if (!is_missing(far)) {
        ASSERT_NEAR(far, ref.far, 1e-12);
      }
    }
  }
}

TEST(Oracle, AucPairCountingWithTies) {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::size_t score_combos = 1;
    for (std::size_t i = 0; i < n; ++i) score_combos *= 3;
    Labels y(n);
    Scores s(n);
    for (std::size_t ycode = 0; ycode < (std::size_t{1} << n); ++ycode) {
      for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>((ycode >> i) & 1U);
      for (std::size_t sc = 0, code = 0; sc < score_combos; ++sc, code = sc) {
        for (std::size_t i = 0; i < n; ++i, code /= 3) s[i] = static_cast<double>(code % 3) * 0.5;
        const double ref = oracle::brute_force_auc(y, s);
        const double got = roc_auc(y, s);
        ASSERT_EQ(is_missing(got), std::isnan(ref));
        if (!is_missing(got)) {
          ASSERT_NEAR(got, ref, 1e-12);
        }
      }
    }
  }
}

TEST(Aggregate, MeanAndSampleStd) {
  const auto r = summarize(std::vector<double>{0.4, 0.6});
  EXPECT_DOUBLE_EQ(r.mean, 0.5);
  EXPECT_NEAR(r.std, 0.1414213562, 1e-9);
  const auto one = summarize(std::vector<double>{0.7});
  EXPECT_DOUBLE_EQ(one.mean, 0.7);
  EXPECT_TRUE(is_missing(one.std));
  const auto flat = summarize(std::vector<double>{0.3, 0.3, 0.3});
  EXPECT_DOUBLE_EQ(flat.std, 0.0);
  const auto holes = summarize(std::vector<double>{0.2, kMissing, 0.4});
  EXPECT_EQ(holes.n_missing, 1u);
  EXPECT_DOUBLE_EQ(holes.mean, 0.30000000000000004);
  EXPECT_THROW(summarize(std::vector<double>{}), InvalidArgument);
  EXPECT_THROW(aggregate(std::vector<MetricsRecord>{}), InvalidArgument);
}

TEST(Aggregate, GroupsByModelModeMetric) {
  std::vector<MetricsRecord> recs;
  for (std::uint64_t s = 0; s < 3; ++s) {
    for (const char* mode : {"full", "strict"}) {
      MetricsRecord r;
      r.seed = s;
      r.mode = mode;
      r.model = "gbdt";
      r.f1_macro = 0.5 + 0.1 * static_cast<double>(s);
      r.roc_auc = 0.7;
      r.far_normal = 0.2;
      r.bal_acc = 0.6;
      r.mcc = 0.1;
      recs.push_back(r);
    }
  }
  const auto rows = aggregate(recs);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0].model, "gbdt");
  EXPECT_EQ(rows[0].mode, "full");
  EXPECT_EQ(rows[0].metric, "bal_acc");
}

TEST(Csv, ResultsRoundTrip) {
  MetricsRecord r;
  r.seed = 4;
  r.mode = "strict";
  r.model = "dru";
  r.f1_macro = 0.1 + 0.2;
  r.far_normal = 1.0 / 3.0;
  r.bal_acc = 0.5;
  r.mcc = -0.25;
  r.n_train = 10;
  r.n_val = 2;
  r.n_test = 3;
  r.prior_train = 0.4;
  std::stringstream ss;
  write_results_csv(ss, std::vector<MetricsRecord>{r});
  const auto text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kResultsHeader);
  const auto back = read_results_csv(ss);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], r);
  std::stringstream bad("seed,mode\n");
  EXPECT_THROW(read_results_csv(bad), DataError);
}
