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

#include "rewa/similarity.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "generators.hpp"
#include "rewa/datagen.hpp"
#include "rewa/errors.hpp"

namespace rewa {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

double oracle_similarity(const Encoding& a, const Encoding& b, const MonoidSpec& spec) {
  double s = 0.0;
  for (std::uint64_t j = 0; j < a.size(); ++j) s += spec.phi(a.at(j), b.at(j));
  return s;
}

Encoding tropical_buckets(std::vector<double> values, double d) {
  EncodingHeader h{MonoidSpec::tropical(d), 0, 1, 1, values.size(), 0, 0};
  Column c;
  c.kind = MonoidKind::kTropical;
  c.values = std::move(values);
  return Encoding(h, {c});
}

TEST(Similarity, TropicalHandExample) {
  const auto a = tropical_buckets({1.0, kInf}, 10.0);
  const auto b = tropical_buckets({2.0, 4.0}, 10.0);
  EXPECT_EQ(rewa_similarity(a, b, MonoidSpec::tropical(10.0)), -17.0);
}

TEST(Similarity, BooleanSelfIsPopcount) {
  testing::Gen gen(31);
  for (int t = 0; t < 100; ++t) {
    const Encoding e = encode(WitnessSpace::boolean_space(500), HashFamily(gen.u64(), 3, 500, gen.between(1, 300)),
                              MonoidSpec::boolean(), gen.id_set(500, 80));
    EXPECT_EQ(rewa_similarity(e, e, MonoidSpec::boolean()), static_cast<double>(e.non_identity_count()));
  }
  const Encoding zero = encode(WitnessSpace::boolean_space(10), HashFamily(1, 2, 10, 16), MonoidSpec::boolean(),
                               IdSet{});
  const Encoding some = encode(WitnessSpace::boolean_space(10), HashFamily(1, 2, 10, 16), MonoidSpec::boolean(),
                               IdSet{{1, 2, 3}});
  EXPECT_EQ(rewa_similarity(zero, some, MonoidSpec::boolean()), 0.0);
}

TEST(Similarity, MatchesOracleAndIsSymmetric) {
  testing::Gen gen(32);
  const auto pspace = WitnessSpace::product_space(WitnessSpace::count_space(30), WitnessSpace::embedding_space(6));
  const auto pspec = product_monoid(MonoidSpec::natural(), MonoidSpec::real(), 0.7, 1.3);
  const Graph g = random_graph(12, 20, 1, 4, 3);
  const auto tspace = WitnessSpace::tropical_space(g, {0, 5, 11}, 6.0);
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t n = gen.between(1, 50);
    const HashFamily pf(gen.u64(), 2, 36, n);
    const Encoding a = encode(pspace, pf, pspec, DataItem::pair(gen.count_map(30, 10, 9), gen.vector(6)));
    const Encoding b = encode(pspace, pf, pspec, DataItem::pair(gen.count_map(30, 10, 9), gen.vector(6)));
    EXPECT_NEAR(rewa_similarity(a, b, pspec), oracle_similarity(a, b, pspec), 1e-9);
    EXPECT_EQ(rewa_similarity(a, b, pspec), rewa_similarity(b, a, pspec));
    const HashFamily tf(gen.u64(), 2, 3, n);
    const Encoding x = encode(tspace, tf, MonoidSpec::tropical(6.0), VertexId{gen.below(12)});
    const Encoding y = encode(tspace, tf, MonoidSpec::tropical(6.0), VertexId{gen.below(12)});
    EXPECT_EQ(rewa_similarity(x, y, MonoidSpec::tropical(6.0)), oracle_similarity(x, y, MonoidSpec::tropical(6.0)));
    EXPECT_EQ(rewa_similarity(x, y, MonoidSpec::tropical(6.0)), rewa_similarity(y, x, MonoidSpec::tropical(6.0)));
    const HashFamily bf(gen.u64(), 3, 100, n);
    const Encoding u = encode(WitnessSpace::boolean_space(100), bf, MonoidSpec::boolean(), gen.id_set(100, 30));
    const Encoding v = encode(WitnessSpace::boolean_space(100), bf, MonoidSpec::boolean(), gen.id_set(100, 30));
    EXPECT_EQ(rewa_similarity(u, v, MonoidSpec::boolean()), oracle_similarity(u, v, MonoidSpec::boolean()));
  }
}

TEST(Similarity, ProductDecomposesIntoChannels) {
  testing::Gen gen(33);
  const auto s1 = WitnessSpace::boolean_space(200);
  const auto s2 = WitnessSpace::embedding_space(16);
  const auto space = WitnessSpace::product_space(s1, s2);
  for (int t = 0; t < 100; ++t) {
    const double l1 = gen.uniform(0, 2);
    const double l2 = gen.uniform(0, 2);
    const auto spec = product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), l1, l2);
    const HashFamily f(gen.u64(), 2, 216, gen.between(1, 128));
    const IdSet ax = gen.id_set(200, 40);
    const IdSet bx = gen.id_set(200, 40);
    const DenseVector ay = gen.vector(16);
    const DenseVector by = gen.vector(16);
    const double joint = rewa_similarity(encode(space, f, spec, DataItem::pair(ax, ay)),
                                         encode(space, f, spec, DataItem::pair(bx, by)), spec);
    const HashFamily f1 = f.slice(0, 200);
    const HashFamily f2 = f.slice(200, 16);
    const double c1 = rewa_similarity(encode(s1, f1, MonoidSpec::boolean(), ax), encode(s1, f1, MonoidSpec::boolean(), bx),
                                      MonoidSpec::boolean());
    const double c2 = rewa_similarity(encode(s2, f2, MonoidSpec::real(), ay), encode(s2, f2, MonoidSpec::real(), by),
                                      MonoidSpec::real());
    const double split = l1 * c1 + l2 * c2;
    EXPECT_LE(std::abs(joint - split), 1e-9 * std::max({1.0, std::abs(joint), std::abs(split)}));
  }
}

TEST(Similarity, HeaderMismatch) {
  const Encoding a = encode(WitnessSpace::boolean_space(10), HashFamily(1, 2, 10, 16), MonoidSpec::boolean(), IdSet{});
  const Encoding b = encode(WitnessSpace::boolean_space(10), HashFamily(2, 2, 10, 16), MonoidSpec::boolean(), IdSet{});
  EXPECT_THROW((void)rewa_similarity(a, b, MonoidSpec::boolean()), IncompatibleEncoding);
  EXPECT_THROW((void)rewa_similarity(a, a, MonoidSpec::natural()), IncompatibleEncoding);
  const std::vector<Encoding> corpus = {b};
  EXPECT_THROW((void)topk(a, corpus, MonoidSpec::boolean(), 1), IncompatibleEncoding);
}

TEST(Similarity, TopkRules) {
  const std::vector<double> scores = {3, 5, 5, 1, 5, 0};
  const RankedList top = topk_scores(scores, 3);
  ASSERT_EQ(top.size(), 3U);
  EXPECT_EQ(top.items[0].id, 1U);
  EXPECT_EQ(top.items[1].id, 2U);
  EXPECT_EQ(top.items[2].id, 4U);
  const RankedList all = topk_scores(scores, scores.size());
  std::vector<std::uint64_t> ids;
  for (const auto& it : all.items) ids.push_back(it.id);
  EXPECT_EQ(ids, (std::vector<std::uint64_t>{1, 2, 4, 0, 3, 5}));
  EXPECT_EQ(all.rank_of(3), 4U);
  EXPECT_EQ(top.rank_of(5), 3U);
  EXPECT_THROW((void)topk_scores(scores, 0), InvalidArgument);
  EXPECT_THROW((void)topk_scores(scores, 7), InvalidArgument);
}

TEST(Similarity, TopkIsSortedAndUnique) {
  testing::Gen gen(34);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> s(gen.between(1, 60));
    for (auto& x : s) x = static_cast<double>(gen.below(10));
    const RankedList r = topk_scores(s, gen.between(1, s.size()));
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_TRUE(seen.insert(r.items[i].id).second);
      if (i > 0) {
        EXPECT_GE(r.items[i - 1].score, r.items[i].score);
        if (r.items[i - 1].score == r.items[i].score) EXPECT_LT(r.items[i - 1].id, r.items[i].id);
      }
    }
    // Everything left out scores no higher than the last kept item.
    for (std::uint64_t id = 0; id < s.size(); ++id) {
      if (!seen.count(id)) EXPECT_LE(s[id], r.items.back().score);
    }
  }
}

TEST(Similarity, DuplicateOfQueryRanksFirst) {
  testing::Gen gen(35);
  const auto space = WitnessSpace::boolean_space(300);
  const Encoder enc(space, HashFamily(5, 2, 300, 256), MonoidSpec::boolean());
  std::vector<Encoding> corpus;
  const IdSet q = gen.id_set(300, 40);
  for (int i = 0; i < 20; ++i) corpus.push_back(enc.encode(gen.id_set(300, 40)));
  corpus[13] = enc.encode(q);
  EXPECT_EQ(topk(enc.encode(q), corpus, MonoidSpec::boolean(), 1).items[0].id, 13U);
}

TEST(Similarity, CalibrationCollisionFreeSlope) {
  // With n = 64 K m almost no witnesses collide, so E[S] ~ K * Delta.
  testing::Gen gen(36);
  const std::uint64_t m = 64;
  const std::uint32_t k = 2;
  const auto space = WitnessSpace::boolean_space(m);
  std::vector<DataItem> items;
  for (int i = 0; i < 40; ++i) items.emplace_back(gen.id_set(m, 30));
  std::vector<ItemPairRef> pairs;
  for (int i = 0; i + 1 < 40; i += 2) pairs.push_back({&items[i], &items[i + 1]});
  const auto cal = calibrate(space, MonoidSpec::boolean(),
                             [&](std::uint64_t s) { return HashFamily(mix64(s), k, m, 64 * k * m); }, pairs, 60);
  EXPECT_NEAR(cal.alpha, k, 0.1);
  EXPECT_NEAR(cal.beta, 0.0, 0.5);
  EXPECT_GT(cal.r_squared, 0.99);
  EXPECT_EQ(cal.seeds_used, 60U);
  EXPECT_EQ(cal.pairs_used, pairs.size());
}

TEST(Similarity, CalibrationPreconditions) {
  const auto space = WitnessSpace::boolean_space(10);
  const DataItem a = IdSet{{1}};
  const DataItem b = IdSet{{2}};
  std::vector<ItemPairRef> same(12, ItemPairRef{&a, &b});
  const FamilyGenerator gen = [](std::uint64_t s) { return HashFamily(s, 1, 10, 8); };
  EXPECT_THROW((void)calibrate(space, MonoidSpec::boolean(), gen, same, 30), DegenerateDesign);
  std::vector<ItemPairRef> few(5, ItemPairRef{&a, &b});
  EXPECT_THROW((void)calibrate(space, MonoidSpec::boolean(), gen, few, 30), InvalidArgument);
  EXPECT_THROW((void)calibrate(space, MonoidSpec::boolean(), gen, same, 10), InvalidArgument);
}

TEST(Similarity, FitLine) {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> y = {1, 3, 5, 7};
  const auto fit = fit_line(x, y);
  EXPECT_DOUBLE_EQ(fit.slope, 2.0);
  EXPECT_DOUBLE_EQ(fit.intercept, 1.0);
  EXPECT_DOUBLE_EQ(fit.r_squared, 1.0);
  const std::vector<double> flat = {2, 2, 2};
  EXPECT_THROW((void)fit_line(flat, flat), DegenerateDesign);
}

TEST(Similarity, MinhashIdenticalAndDisjoint) {
  const auto space = WitnessSpace::priority_space(100, 4);
  const Encoder enc(space, HashFamily(4, 1, 100, 16), MonoidSpec::tropical(1.0));
  const IdSet x{{1, 5, 9, 40, 77}};
  EXPECT_EQ(minhash_jaccard(enc.encode(x), enc.encode(x)), 1.0);
  EXPECT_EQ(minhash_jaccard(enc.encode(x), enc.encode(IdSet{{2, 6}})), 0.0);
  EXPECT_THROW((void)minhash_jaccard(enc.encode(IdSet{}), enc.encode(IdSet{})), InvalidArgument);
}

TEST(Similarity, CountMinNeverUnderestimates) {
  testing::Gen gen(37);
  for (int t = 0; t < 50; ++t) {
    const CountMap c = gen.count_map(500, 300, 1000);
    const Encoder enc(WitnessSpace::count_space(500), HashFamily(gen.u64(), 3, 500, gen.between(1, 64)),
                      MonoidSpec::natural());
    const Encoding sketch = enc.encode(c);
    for (const auto& [id, count] : c.entries) EXPECT_GE(count_min_estimate(sketch, enc, id), count);
  }
}

TEST(Similarity, BloomContainsEveryMember) {
  testing::Gen gen(38);
  const Encoder enc(WitnessSpace::boolean_space(1000), HashFamily(3, 4, 1000, 128), MonoidSpec::boolean());
  const IdSet x = gen.id_set(1000, 30);
  const Encoding filter = enc.encode(x);
  for (const auto id : x.ids) EXPECT_TRUE(bloom_contains(filter, enc, id));
}

TEST(Similarity, SoftmaxPreservesArgsort) {
  testing::Gen gen(39);
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> s(gen.between(1, 50));
    for (auto& x : s) x = gen.coin() ? static_cast<double>(gen.below(5)) : gen.uniform(-30, 30);
    const auto p = softmax(s);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    EXPECT_EQ(argsort_descending(s), argsort_descending(p));
  }
  const std::vector<double> big = {1000, 999, -1000};
  const auto p = softmax(big);
  for (const double v : p) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(argsort_descending(big), (std::vector<std::size_t>{0, 1, 2}));
}

}  // namespace
}  // namespace rewa
