/*
 * Copyright 2026 The rewa-sketch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include "rewa/errors.hpp"
#include "rewa/harness/config.hpp"
#include "rewa/harness/experiments.hpp"
#include "rewa/harness/report.hpp"

namespace rewa::harness {
namespace {

ExperimentConfig small_ranking() {
  ExperimentConfig c;
  c.corpus_size = 64;
  c.corpus_sizes = {64};
  c.queries = 2;
  c.trials = 30;
  c.n_grid = {32, 64, 128, 256};
  c.calibration_pairs = 12;
  return c;
}

TEST(Config, ParseGridForms) {
  EXPECT_EQ(parse_grid("5, 3,9"), (std::vector<std::uint64_t>{5, 3, 9}));
  EXPECT_EQ(parse_grid("160:184:8"), (std::vector<std::uint64_t>{160, 168, 176, 184}));
  EXPECT_EQ(parse_grid("100:400:x2"), (std::vector<std::uint64_t>{100, 200, 400}));
  EXPECT_THROW((void)parse_grid(""), InvalidArgument);
  EXPECT_THROW((void)parse_grid("10:5:1"), InvalidArgument);
  EXPECT_THROW((void)parse_grid("1:5:0"), InvalidArgument);
  EXPECT_THROW((void)parse_grid("1:5:x1"), InvalidArgument);
  EXPECT_THROW((void)parse_grid("0,4"), InvalidArgument);
  EXPECT_THROW((void)parse_grid("a,b"), InvalidArgument);
}

TEST(Config, DefaultGrids) {
  const ExperimentConfig c;
  const auto g = c.ranking_grid();
  EXPECT_EQ(g.front(), 160U);
  EXPECT_EQ(g.back(), 400U);
  EXPECT_EQ(g.size(), 31U);
  const auto s = c.gap_sweep_grid();
  EXPECT_EQ(s.front(), 128U);
  EXPECT_LE(s.back(), 32768U);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::set<std::uint64_t>(s.begin(), s.end()).size(), s.size());
}

TEST(Config, ReadsKeyValueLines) {
  ExperimentConfig c;
  std::istringstream in("# comment\ninstantiation = natural\n\nhashes=3  # trailing\nlambda1 = 1/32\nn_grid = 8,16\n");
  apply_config(c, in);
  EXPECT_EQ(c.instantiation, "natural");
  EXPECT_EQ(c.hashes, 3U);
  EXPECT_DOUBLE_EQ(c.lambda1, 1.0 / 32.0);
  EXPECT_EQ(c.n_grid, (std::vector<std::uint64_t>{8, 16}));
}

TEST(Config, UnknownKeyNamesLine) {
  ExperimentConfig c;
  std::istringstream in("hashes = 2\nbogus = 1\n");
  try {
    apply_config(c, in);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_EQ(std::string(e.what()).rfind("config line 2:", 0), 0U) << e.what();
  }
  std::istringstream bad("hashes two\n");
  EXPECT_THROW(apply_config(c, bad), InvalidArgument);
}

TEST(Config, ValidateRejects) {
  auto expect_bad = [](auto mutate) {
    ExperimentConfig c;
    mutate(c);
    EXPECT_THROW(c.validate(), InvalidArgument);
  };
  expect_bad([](ExperimentConfig& c) { c.instantiation = "median"; });
  expect_bad([](ExperimentConfig& c) { c.method = "sketchy"; });
  expect_bad([](ExperimentConfig& c) { c.trials = 29; });
  expect_bad([](ExperimentConfig& c) { c.delta = 0.0; });
  expect_bad([](ExperimentConfig& c) { c.delta = 1.0; });
  expect_bad([](ExperimentConfig& c) { c.k = 0; });
  expect_bad([](ExperimentConfig& c) { c.hashes = 0; });
  expect_bad([](ExperimentConfig& c) { c.queries = 0; });
  expect_bad([](ExperimentConfig& c) { c.gap_levels.clear(); });
  ExperimentConfig ok;
  EXPECT_NO_THROW(ok.validate());
}

TEST(Ranking, DeterministicReport) {
  const ExperimentConfig c = small_ranking();
  const std::string a = envelope("ranking", c, to_json(run_ranking(c))).dump();
  const std::string b = envelope("ranking", c, to_json(run_ranking(c))).dump();
  EXPECT_EQ(a, b);
  ExperimentConfig other = c;
  other.seed = 2;
  EXPECT_NE(a, envelope("ranking", other, to_json(run_ranking(other))).dump());
}

TEST(Ranking, MinimalNIsFirstPointAtTarget) {
  const ExperimentConfig c = small_ranking();
  const RankingReport r = run_ranking(c);
  ASSERT_EQ(r.corpora.size(), 1U);
  ASSERT_EQ(r.grid.size(), c.n_grid.size());
  const auto idx = minimal_index(r.grid, c.delta);
  if (idx) {
    ASSERT_TRUE(r.corpora[0].minimal_n.has_value());
    EXPECT_EQ(*r.corpora[0].minimal_n, r.grid[*idx].buckets);
    EXPECT_GE(r.grid[*idx].success_rate, 1.0 - c.delta);
    for (std::size_t i = 0; i < *idx; ++i) EXPECT_LT(r.grid[i].success_rate, 1.0 - c.delta);
  } else {
    EXPECT_FALSE(r.corpora[0].minimal_n.has_value());
  }
  for (const auto& p : r.grid) {
    EXPECT_EQ(p.attempts, c.trials * c.queries);
    EXPECT_DOUBLE_EQ(p.success_rate, static_cast<double>(p.successes) / static_cast<double>(p.attempts));
  }
  EXPECT_FALSE(r.log_fit.has_value());
  EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "log_fit_omitted_single_corpus_size"), r.flags.end());
}

TEST(Ranking, MinimalIndexRule) {
  std::vector<GridPoint> curve(4);
  const double rates[] = {0.5, 0.96, 0.9, 1.0};
  for (std::size_t i = 0; i < 4; ++i) curve[i].success_rate = rates[i];
  EXPECT_EQ(minimal_index(curve, 0.05), std::optional<std::size_t>(1));
  EXPECT_EQ(minimal_index(curve, 0.01), std::optional<std::size_t>(3));
  curve[3].success_rate = 0.98;
  EXPECT_EQ(minimal_index(curve, 0.01), std::nullopt);
}

TEST(Ranking, DisjointNeighborGapRetrievesPerfectly) {
  // A neighbor sharing the whole base block against distractors sharing nothing
  // is never outranked once collisions are rare.
  ExperimentConfig c = small_ranking();
  c.overlap_hi = 64;
  c.overlap_lo = 0;
  c.share_min = 0;
  c.n_grid = {4096};
  const RankingReport r = run_ranking(c);
  EXPECT_EQ(r.grid[0].success_rate, 1.0);
}

TEST(Ranking, RejectsUnsupportedInstantiation) {
  ExperimentConfig c = small_ranking();
  c.instantiation = "tropical";
  EXPECT_THROW((void)run_ranking(c), InvalidArgument);
}

TEST(Ranking, ReferenceBoundFormula) {
  const double b = reference_bound(8.0, 1.0, 2.0, 0.5, 4.0, 2, 100, 1, 0.05);
  EXPECT_NEAR(b, 8.0 * 2.0 / (0.25 * 16.0 * 2.0) * (std::log(100.0) + std::log(20.0)), 1e-12);
}

TEST(Report, CsvHeaders) {
  const ExperimentConfig c = small_ranking();
  const std::string csv = to_csv(run_ranking(c));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "N,n,success_rate");
  std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  EXPECT_EQ(lines, 1 + c.n_grid.size());
}

TEST(Report, EnvelopeShape) {
  const ExperimentConfig c = small_ranking();
  const auto j = envelope("ranking", c, to_json(run_ranking(c)));
  EXPECT_EQ(j["schema"], "rewa-report/1");
  EXPECT_EQ(j["experiment"], "ranking");
  EXPECT_EQ(j["config"]["hashes"], 2);
  EXPECT_TRUE(j["result"].contains("grid"));
  EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(FailureModes, MedianFoldDependsOnOrder) {
  const WitnessSpace space = WitnessSpace::embedding_space(3, 1.0);
  const Encoder enc(space, HashFamily(1, 1, 3, 1), MonoidSpec::real());
  const DataItem x = DenseVector{{0.1, 0.5, 0.9}};
  const auto a = median_fold(enc, x, {0, 1, 2});
  const auto b = median_fold(enc, x, {2, 1, 0});
  ASSERT_EQ(a.size(), 1U);
  EXPECT_DOUBLE_EQ(a[0], 0.6);
  EXPECT_DOUBLE_EQ(b[0], 0.4);
  const Encoder wide(space, HashFamily(1, 1, 3, 64), MonoidSpec::real());
  std::size_t empty = 0;
  for (const double v : median_fold(wide, x, {0, 1, 2})) empty += std::isnan(v) ? 1 : 0;
  EXPECT_GE(empty, 61U);
}

TEST(FailureModes, AssociativeMonoidsIgnoreOrder) {
  ExperimentConfig c;
  c.corpus_size = 64;
  c.queries = 1;
  c.trials = 30;
  c.gap_levels = {32, 4};
  c.sweep_grid = {64, 256, 1024, 4096};
  const FailureReport r = run_failure_modes(c);
  EXPECT_TRUE(r.median_order_dependent);
  EXPECT_GT(r.median_distinct, 1U);
  EXPECT_EQ(r.associative.size(), 5U);
  for (const auto& p : r.associative) EXPECT_EQ(p.differing, 0U) << p.monoid;
  ASSERT_EQ(r.sweep.levels.size(), 2U);
}

TEST(Hybrid, DecompositionAndCollapse) {
  ExperimentConfig c;
  c.corpus_size = 64;
  c.queries = 2;
  c.trials = 30;
  c.hybrid_pairs = 20;
  const HybridReport r = run_hybrid(c);
  EXPECT_LE(r.max_relative_deviation, 1e-9);
  EXPECT_TRUE(r.collapse_identical);
  EXPECT_GT(r.combined_gap, 0.0);
  EXPECT_LT(r.channel1_gap, 0.0);
  EXPECT_LT(r.channel2_gap, 0.0);
}

TEST(Selftest, LawsHoldEverywhere) {
  for (const auto& spec : {MonoidSpec::boolean(), MonoidSpec::natural(), MonoidSpec::real(), MonoidSpec::tropical(5),
                           product_monoid(MonoidSpec::boolean(), MonoidSpec::tropical(2), 0.5, 2)}) {
    const LawCheck l = check_monoid_laws(spec, 2000, 3);
    EXPECT_EQ(l.associativity_failures + l.commutativity_failures + l.identity_failures, 0U) << l.monoid;
  }
}

TEST(Seeds, TrialSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(trial_seed(1, t));
  EXPECT_EQ(seen.size(), 1000U);
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

}  // namespace
}  // namespace rewa::harness
