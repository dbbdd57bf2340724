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
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

#include "uavbench/audit/modes.hpp"
#include "uavbench/core/rng.hpp"
#include "uavbench/ingest/align.hpp"
#include "uavbench/ingest/raw.hpp"
#include "uavbench/ingest/synth.hpp"
#include "uavbench/ingest/table.hpp"
#include "uavbench/preprocess/mutual_info.hpp"

using namespace uavbench;
using namespace uavbench::ingest;

namespace {

SensorStream stream(std::string name, std::vector<std::int64_t> t, std::vector<std::string> ch,
                    std::vector<std::vector<double>> rows, std::optional<std::vector<int>> labels = std::nullopt) {
  SensorStream s;
  s.sensor = std::move(name);
  s.time_us = std::move(t);
  s.channels = std::move(ch);
  s.values = Matrix(0, s.channels.size());
  for (const auto& r : rows) s.values.append_row(r);
  s.labels = std::move(labels);
  return s;
}

SensorStream random_stream(Rng& rng, const std::string& name, std::size_t rows) {
  SensorStream s;
  s.sensor = name;
  s.channels = {name + "_v"};
  s.values = Matrix(0, 1);
  std::int64_t t = static_cast<std::int64_t>(rng.below(50));
  for (std::size_t i = 0; i < rows; ++i) {
    t += 1 + static_cast<std::int64_t>(rng.below(20));
    s.time_us.push_back(t);
    const double v = rng.normal();
    s.values.append_row(std::span<const double>(&v, 1));
  }
  return s;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("uavbench_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

}  // namespace

TEST(AsofAlign, TakesMostRecentEarlierSample) {
  const auto base = stream("ATT", {10, 20}, {"Roll"}, {{0.1}, {0.2}});
  const std::vector<SensorStream> others{stream("BAT", {5, 15}, {"Volt"}, {{1.0}, {2.0}})};
  const auto j = asof_align(base, others);
  ASSERT_EQ(j.rows(), 2u);
  EXPECT_EQ(j.values(0, 1), 1.0);
  EXPECT_EQ(j.values(1, 1), 2.0);
}

TEST(AsofAlign, DropsRowsBeforeFirstSample) {
  const auto base = stream("ATT", {3, 10}, {"Roll"}, {{0.1}, {0.2}});
  const std::vector<SensorStream> others{stream("BAT", {5}, {"Volt"}, {{7.0}})};
  const auto j = asof_align(base, others);
  ASSERT_EQ(j.rows(), 1u);
  EXPECT_EQ(j.time_us[0], 10);
}

TEST(AsofAlign, EqualTimestampIsTaken) {
  const auto base = stream("ATT", {5}, {"Roll"}, {{0.1}});
  const std::vector<SensorStream> others{stream("BAT", {5, 6}, {"Volt"}, {{7.0}, {8.0}})};
  const auto j = asof_align(base, others);
  ASSERT_EQ(j.rows(), 1u);
  EXPECT_EQ(j.values(0, 1), 7.0);
}

TEST(AsofAlign, RejectsUnsortedStream) {
  const auto base = stream("ATT", {5, 4}, {"Roll"}, {{0.1}, {0.2}});
  EXPECT_THROW(asof_align(base, {}), DataError);
}

TEST(AsofAlign, MatchesLinearScanAndNeverReadsTheFuture) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto base = random_stream(rng, "B", 60);
    const std::vector<SensorStream> others{random_stream(rng, "C", 40), random_stream(rng, "D", 90)};
    const auto j = asof_align(base, others);
    std::size_t out = 0;
    for (std::size_t r = 0; r < base.rows(); ++r) {
      const auto t = base.time_us[r];
      std::vector<double> expect{base.values(r, 0)};
      bool ok = true;
      for (const auto& o : others) {
        std::ptrdiff_t hit = -1;
        for (std::size_t k = 0; k < o.rows(); ++k) {
          if (o.time_us[k] <= t) hit = static_cast<std::ptrdiff_t>(k);
        }
        if (hit < 0) {
          ok = false;
          break;
        }
        expect.push_back(o.values(static_cast<std::size_t>(hit), 0));
      }
      if (!ok) continue;
      ASSERT_LT(out, j.rows());
      EXPECT_EQ(j.time_us[out], t);
      for (std::size_t c = 0; c < expect.size(); ++c) EXPECT_EQ(j.values(out, c), expect[c]);
      for (auto src : j.source_time[out]) EXPECT_LE(src, t);
      ++out;
    }
    EXPECT_EQ(out, j.rows());
  }
}

TEST(VoteLabels, Examples) {
  const std::vector<int> a{0, 0, 3}, b{1, 2}, c{3, 3, 3}, none{};
  EXPECT_EQ(vote_labels(a), 0);
  EXPECT_FALSE(vote_labels(b).has_value());
  EXPECT_EQ(vote_labels(c), 3);
  EXPECT_FALSE(vote_labels(none).has_value());
}

TEST(VoteLabels, PermutationInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> v(1 + rng.below(7));
    for (auto& x : v) x = static_cast<int>(rng.below(5));
    const auto ref = vote_labels(v);
    for (int p = 0; p < 5; ++p) {
      rng.shuffle(std::span<int>(v));
      EXPECT_EQ(vote_labels(v), ref);
    }
  }
}

TEST(Finalize, PrefixesCollidingChannelsAndDropsConstants) {
  const auto base = stream("BAT", {10, 20, 30}, {"Temp", "Volt", "Flag"}, {{30, 12.1, 1}, {31, 12.0, 1}, {32, 11.9, 1}},
                           std::vector<int>{0, 3, 3});
  const std::vector<SensorStream> others{
      stream("BARO", {1, 15, 25}, {"Temp", "Press"}, {{20, 1000}, {21, 1001}, {22, 999}}, std::vector<int>{0, 3, 3})};
  FinalizeStats st;
  const auto t = finalize(asof_align(base, others), &st);
  EXPECT_EQ(t.feature_names, (std::vector<std::string>{"BAT_Temp", "Volt", "BARO_Temp", "Press"}));
  EXPECT_EQ(st.dropped_constant, std::vector<std::string>{"Flag"});
  EXPECT_EQ(t.label, (std::vector<int>{0, 3, 3}));
  EXPECT_EQ(t.binary_labels(), (Labels{0, 1, 1}));
}

TEST(Finalize, DiscardsTiedRowsAndKeepsPositiveVariance) {
  const auto base = stream("A", {10, 20, 30, 40}, {"x"}, {{1}, {2}, {3}, {4}}, std::vector<int>{0, 1, 2, 0});
  const std::vector<SensorStream> others{
      stream("B", {0, 20, 30, 40}, {"y"}, {{5}, {6}, {7}, {9}}, std::vector<int>{0, 2, 2, 0})};
  FinalizeStats st;
  const auto t = finalize(asof_align(base, others), &st);
  EXPECT_EQ(st.discarded_ties, 1u);
  EXPECT_EQ(t.time_us, (std::vector<std::int64_t>{10, 30, 40}));
  EXPECT_EQ(t.label, (std::vector<int>{0, 2, 0}));
  EXPECT_TRUE(t.is_time_sorted());
  for (std::size_t c = 0; c < t.cols(); ++c) {
    const auto col = t.features.column(c);
    EXPECT_NE(*std::min_element(col.begin(), col.end()), *std::max_element(col.begin(), col.end()));
  }
}

TEST(Finalize, EmptyResultIsAnError) {
  const auto base = stream("A", {10, 20}, {"x"}, {{1}, {2}}, std::vector<int>{1, 2});
  const std::vector<SensorStream> others{stream("B", {0, 1}, {"y"}, {{5}, {6}}, std::vector<int>{2, 1})};
  EXPECT_THROW(finalize(asof_align(base, others)), DataError);
}

TEST(RawFiles, DelimiterDetectionAndErrors) {
  std::istringstream semi("TimeUS;Volt;label\n1;12.5;0\n2;12.4;3\n");
  const auto s = read_stream(semi, "BAT");
  EXPECT_EQ(s.channels, std::vector<std::string>{"Volt"});
  EXPECT_EQ(*s.labels, (std::vector<int>{0, 3}));
  std::istringstream tab("TimeUS\tA\tB\n1\t1\t2\n");
  EXPECT_EQ(read_stream(tab, "X").channels.size(), 2u);
  std::istringstream no_time("A,B\n1,2\n");
  EXPECT_THROW(read_stream(no_time, "X"), DataError);
  std::istringstream bad("TimeUS,A\n1,abc\n");
  EXPECT_THROW(read_stream(bad, "X"), DataError);
  std::istringstream short_row("TimeUS,A\n1\n");
  EXPECT_THROW(read_stream(short_row, "X"), DataError);
}

TEST(RawFiles, DirectoryReconstructionUsesLongestStreamAsBase) {
  TempDir dir("raw");
  write_file(dir.path / "ATT.csv", "TimeUS,Roll,label\n10,0.1,0\n20,0.2,0\n30,0.3,1\n40,0.4,1\n");
  write_file(dir.path / "BAT.csv", "TimeUS,Volt,label\n5,12.0,0\n25,11.0,1\n");
  write_file(dir.path / "notes.md", "ignored");
  const auto streams = read_raw_dir(dir.path);
  ASSERT_EQ(streams.size(), 2u);
  EXPECT_EQ(streams[choose_base(streams)].sensor, "ATT");
  const auto t = reconstruct(streams);
  EXPECT_EQ(t.rows(), 4u);
  EXPECT_EQ(t.label, (std::vector<int>{0, 0, 1, 1}));
  EXPECT_EQ(t.features.column(1), (std::vector<double>{12.0, 12.0, 11.0, 11.0}));
  EXPECT_EQ(t.feature_names, (std::vector<std::string>{"Roll", "Volt"}));
}

TEST(Checksum, KnownDigestAndManifest) {
  TempDir dir("sum");
  write_file(dir.path / "abc.csv", "abc");
  EXPECT_EQ(sha256_file(dir.path / "abc.csv"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  write_file(dir.path / "MANIFEST",
             "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad  abc.csv\n"
             "0000000000000000000000000000000000000000000000000000000000000000  missing.csv\n");
  const auto bad = verify_checksums(dir.path, dir.path / "MANIFEST");
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].file, "missing.csv");
  EXPECT_TRUE(bad[0].actual.empty());
  write_file(dir.path / "abc.csv", "abd");
  EXPECT_EQ(verify_checksums(dir.path, dir.path / "MANIFEST").size(), 2u);
}

TEST(Table, CsvRoundTripIsByteStable) {
  auto spec = SynthSpec::proxy_heavy(3);
  spec.n_rows = 300;
  const auto t = synth_generate(spec);
  std::ostringstream a;
  write_table(a, t);
  std::istringstream in(a.str());
  const auto back = read_table(in);
  EXPECT_EQ(back, t);
  std::ostringstream b;
  write_table(b, back);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, 7), "TimeUS,");
  EXPECT_EQ(a.str().substr(a.str().find('\n') - 6, 6), ",label");
}

TEST(Table, LabelFilterAndSort) {
  TelemetryTable t;
  t.feature_names = {"a"};
  t.features = Matrix{{3}, {1}, {2}, {4}};
  t.time_us = {30, 10, 20, 40};
  t.label = {3, 0, 1, 0};
  t.sort_by_time();
  EXPECT_EQ(t.label, (std::vector<int>{0, 1, 3, 0}));
  EXPECT_EQ(t.features.column(0), (std::vector<double>{1, 2, 3, 4}));
  const std::vector<int> keep{0, 3};
  const auto f = t.filter_labels(keep);
  EXPECT_EQ(f.label, (std::vector<int>{0, 3, 0}));
  EXPECT_EQ(f.binary_labels(), (Labels{0, 1, 0}));
}

TEST(Synth, DefaultShapeEpisodesAndDeterminism) {
  const auto t = synth_generate(SynthSpec::proxy_heavy(0));
  EXPECT_EQ(t.rows(), 4817u);
  EXPECT_EQ(t.cols(), 72u);
  EXPECT_EQ(t.feature_names, audit::reference_schema());
  EXPECT_EQ(count_episodes(t.time_us), 3);
  EXPECT_TRUE(t.is_time_sorted());
  EXPECT_EQ(synth_generate(SynthSpec::proxy_heavy(0)), t);
  EXPECT_NE(synth_generate(SynthSpec::proxy_heavy(1)).features, t.features);
  std::set<int> labels(t.label.begin(), t.label.end());
  EXPECT_EQ(labels, (std::set<int>{0, 1, 2, 3, 4}));
}

TEST(Synth, FaultThreeRecursInEveryEpisode) {
  const auto t = synth_generate(SynthSpec::proxy_heavy(0));
  int episode = 0;
  std::set<int> seen;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    if (r > 0 && t.time_us[r] - t.time_us[r - 1] > kDefaultEpisodeGapUs) ++episode;
    if (t.label[r] == 3) seen.insert(episode);
  }
  EXPECT_EQ(seen, (std::set<int>{0, 1, 2}));
}

TEST(Synth, ZeroProxyStrengthMakesProxiesUninformative) {
  auto spec = SynthSpec::proxy_heavy(2);
  spec.n_rows = 2000;
  spec.proxy_strength = 0.0;
  const auto t = synth_generate(spec);
  const auto y = t.binary_labels();
  const auto r = preprocess::mi_rank(t.features, y);
  for (std::size_t c = audit::kStrictDefault.size(); c < t.cols(); ++c) {
    EXPECT_LT(r.mi[c], 0.05) << t.feature_names[c];
  }
  spec.proxy_strength = 3.0;
  const auto strong = synth_generate(spec);
  const auto r2 = preprocess::mi_rank(strong.features, y);
  EXPECT_GT(r2.mi[*strong.column_index("Offset")], 0.3);
}

TEST(Synth, InvalidSpecsThrow) {
  SynthSpec s;
  s.n_episodes = 0;
  EXPECT_THROW(synth_generate(s), InvalidArgument);
  s = {};
  s.proxy_label_coupling = 1.5;
  EXPECT_THROW(synth_generate(s), InvalidArgument);
  s = {};
  s.n_rows = 10;
  EXPECT_THROW(synth_generate(s), InvalidArgument);
}
