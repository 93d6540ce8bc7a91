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

#include "rewa/encoding.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "generators.hpp"
#include "rewa/datagen.hpp"
#include "rewa/errors.hpp"

namespace rewa {
namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Literal bucket definition: B[j] folds f_i(x) over every witness i with some
// h_k(i) = j, in ascending i, starting from the identity.
std::vector<MonoidElement> oracle_encode(const WitnessSpace& space, const HashFamily& family, const MonoidSpec& spec,
                                         const DataItem& x) {
  std::vector<MonoidElement> b(family.buckets(), spec.identity());
  for (std::uint64_t j = 0; j < family.buckets(); ++j) {
    for (std::uint64_t i = 0; i < space.size(); ++i) {
      bool hit = false;
      for (std::uint32_t k = 0; k < family.num_functions(); ++k) hit = hit || family.eval(k, i) == j;
      if (hit) b[j] = spec.combine(b[j], space.evaluate(i, x));
    }
  }
  return b;
}

void expect_matches_oracle(const WitnessSpace& space, const HashFamily& family, const MonoidSpec& spec,
                           const DataItem& x) {
  const Encoding enc = encode(space, family, spec, x);
  const auto want = oracle_encode(space, family, spec, x);
  ASSERT_EQ(enc.size(), want.size());
  for (std::uint64_t j = 0; j < want.size(); ++j) {
    if (spec.kind() == MonoidKind::kReal) {
      EXPECT_NEAR(enc.at(j).real_value(), want[j].real_value(), 1e-12) << j;
    } else if (spec.kind() == MonoidKind::kProduct && spec.second().kind() == MonoidKind::kReal) {
      EXPECT_EQ(enc.at(j).first(), want[j].first()) << j;
      EXPECT_NEAR(enc.at(j).second().real_value(), want[j].second().real_value(), 1e-12) << j;
    } else {
      EXPECT_EQ(enc.at(j), want[j]) << j;
    }
  }
}

TEST(Encoding, SingleWitnessSingleBucket) {
  const Encoding enc = encode(WitnessSpace::boolean_space(1), HashFamily(3, 1, 1, 4), MonoidSpec::boolean(),
                              IdSet{{0}});
  EXPECT_EQ(enc.non_identity_count(), 1U);
  std::uint64_t ones = 0;
  for (std::uint64_t j = 0; j < 4; ++j) ones += enc.at(j).boolean_value();
  EXPECT_EQ(ones, 1U);
}

TEST(Encoding, TotalCollisionSums) {
  const Encoding enc = encode(WitnessSpace::count_space(2), HashFamily(1, 3, 2, 1), MonoidSpec::natural(),
                              CountMap{{{0, 4}, {1, 9}}});
  EXPECT_EQ(enc.at(0), MonoidElement::natural(13));
}

TEST(Encoding, DuplicateBucketsCountOnce) {
  // With n = 1 every hash function hits bucket 0; each witness still contributes once.
  const Encoding enc = encode(WitnessSpace::count_space(3), HashFamily(5, 8, 3, 1), MonoidSpec::natural(),
                              CountMap{{{2, 6}}});
  EXPECT_EQ(enc.at(0), MonoidElement::natural(6));
  const Encoding real = encode(WitnessSpace::embedding_space(2), HashFamily(5, 8, 2, 1), MonoidSpec::real(),
                               DenseVector{{0.5, 0.25}});
  EXPECT_EQ(real.at(0), MonoidElement::real(0.75));
}

TEST(Encoding, MatchesLiteralDefinition) {
  testing::Gen gen(21);
  const Graph g = random_graph(16, 24, 0.5, 5.0, 4);
  const auto tropical = WitnessSpace::tropical_space(g, sample_landmarks(16, 6, 1), 8.0);
  Graph split(10);
  split.add_edge(0, 1, 1.0);
  const auto unreachable = WitnessSpace::tropical_space(split, {0, 1, 5}, 3.0);
  for (int t = 0; t < 40; ++t) {
    const std::uint32_t k = static_cast<std::uint32_t>(gen.between(1, 4));
    const std::uint64_t n = gen.between(1, 40);
    expect_matches_oracle(WitnessSpace::boolean_space(50), HashFamily(gen.u64(), k, 50, n), MonoidSpec::boolean(),
                          gen.id_set(50, 20));
    expect_matches_oracle(WitnessSpace::count_space(50, 6), HashFamily(gen.u64(), k, 50, n), MonoidSpec::natural(6),
                          gen.count_map(50, 20, 30));
    expect_matches_oracle(WitnessSpace::embedding_space(10), HashFamily(gen.u64(), k, 10, n), MonoidSpec::real(),
                          gen.vector(10));
    expect_matches_oracle(tropical, HashFamily(gen.u64(), k, 6, n), MonoidSpec::tropical(8.0),
                          VertexId{gen.below(16)});
    expect_matches_oracle(unreachable, HashFamily(gen.u64(), k, 3, n), MonoidSpec::tropical(3.0),
                          VertexId{gen.below(10)});
    const auto product = WitnessSpace::product_space(WitnessSpace::boolean_space(30), WitnessSpace::embedding_space(6));
    expect_matches_oracle(product, HashFamily(gen.u64(), k, 36, n),
                          product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), 0.5, 2.0),
                          DataItem::pair(gen.id_set(30, 10), gen.vector(6)));
  }
}

TEST(Encoding, BloomEquivalence) {
  testing::Gen gen(22);
  for (int t = 0; t < 50; ++t) {
    const std::uint64_t universe = 5000;
    const HashFamily family(gen.u64(), 5, universe, 512);
    const IdSet x = gen.id_set(universe, 100);
    std::vector<bool> bits(512, false);
    for (const auto id : x.ids) {
      for (std::uint32_t k = 0; k < 5; ++k) bits[family.eval(k, id)] = true;
    }
    const Encoding enc = encode(WitnessSpace::boolean_space(universe), family, MonoidSpec::boolean(), x);
    for (std::uint64_t j = 0; j < 512; ++j) ASSERT_EQ(enc.columns()[0].bit(j), bits[j]);
  }
}

TEST(Encoding, OrderIndependence) {
  testing::Gen gen(23);
  const auto check = [&](const WitnessSpace& space, const MonoidSpec& spec, const DataItem& x, std::uint64_t n) {
    const Encoder encoder(space, HashFamily(gen.u64(), 3, space.size(), n), spec);
    const Encoding reference = encoder.encode(x);
    for (int p = 0; p < 100; ++p) {
      const auto order = gen.permutation(space.size());
      const Encoding e = encoder.encode_in_order(x, order);
      if (spec.kind() == MonoidKind::kReal) {
        for (std::uint64_t j = 0; j < n; ++j) {
          EXPECT_NEAR(e.at(j).real_value(), reference.at(j).real_value(), 1e-9);
        }
      } else {
        EXPECT_TRUE(e == reference);
      }
    }
  };
  check(WitnessSpace::boolean_space(80), MonoidSpec::boolean(), gen.id_set(80, 40), 16);
  check(WitnessSpace::count_space(80), MonoidSpec::natural(), gen.count_map(80, 40, 1000), 16);
  check(WitnessSpace::embedding_space(40), MonoidSpec::real(), gen.vector(40, 1.0), 8);
  const Graph g = random_graph(30, 50, 1, 9, 5);
  check(WitnessSpace::tropical_space(g, sample_landmarks(30, 12, 2), 50.0), MonoidSpec::tropical(50.0), VertexId{7},
        5);
}

TEST(Encoding, InOrderRejectsNonPermutation) {
  const Encoder encoder(WitnessSpace::boolean_space(4), HashFamily(1, 1, 4, 4), MonoidSpec::boolean());
  const std::vector<std::uint64_t> dup = {0, 1, 1, 3};
  const std::vector<std::uint64_t> short_order = {0, 1, 2};
  EXPECT_THROW((void)encoder.encode_in_order(IdSet{{1}}, dup), InvalidArgument);
  EXPECT_THROW((void)encoder.encode_in_order(IdSet{{1}}, short_order), InvalidArgument);
}

TEST(Encoding, IdentityPreservation) {
  testing::Gen gen(24);
  for (int t = 0; t < 200; ++t) {
    const std::uint32_t k = static_cast<std::uint32_t>(gen.between(1, 6));
    const IdSet x = gen.id_set(1000, 50);
    const Encoding enc = encode(WitnessSpace::boolean_space(1000), HashFamily(gen.u64(), k, 1000, gen.between(1, 500)),
                                MonoidSpec::boolean(), x);
    EXPECT_LE(enc.non_identity_count(), x.ids.size() * k);
    const CountMap c = gen.count_map(1000, 50, 5);
    const Encoding cenc = encode(WitnessSpace::count_space(1000), HashFamily(gen.u64(), k, 1000, 300),
                                 MonoidSpec::natural(), c);
    EXPECT_LE(cenc.non_identity_count(), c.entries.size() * k);
  }
}

TEST(Encoding, Determinism) {
  const auto space = WitnessSpace::fourier_space(4, 256, 1.0, 3);
  const DataItem x = DenseVector{{0.1, -0.2, 0.3, 0.5}};
  const Encoding a = encode(space, HashFamily(9, 2, 256, 64), MonoidSpec::real(), x);
  const Encoding b = encode(space, HashFamily(9, 2, 256, 64), MonoidSpec::real(), x);
  EXPECT_TRUE(a == b);
  EXPECT_EQ(serialize(a), serialize(b));
}

TEST(Encoding, EncoderPreconditions) {
  EXPECT_THROW(Encoder(WitnessSpace::boolean_space(10), HashFamily(1, 1, 11, 4), MonoidSpec::boolean()),
               InvalidArgument);
  EXPECT_THROW(Encoder(WitnessSpace::boolean_space(10), HashFamily(1, 1, 10, 4), MonoidSpec::natural()), TypeError);
  Graph g(3);
  g.add_edge(0, 1, 1.0);
  EXPECT_THROW(Encoder(WitnessSpace::tropical_space(g, {0}, 10.0), HashFamily(1, 1, 1, 4), MonoidSpec::tropical(5.0)),
               TypeError);
}

TEST(Encoding, HeaderRecordsParameters) {
  const auto space = WitnessSpace::boolean_space(100);
  const Encoding enc = encode(space, HashFamily(77, 3, 100, 32), MonoidSpec::boolean(), IdSet{{4}});
  EXPECT_EQ(enc.header().seed, 77U);
  EXPECT_EQ(enc.header().num_functions, 3U);
  EXPECT_EQ(enc.header().universe, 100U);
  EXPECT_EQ(enc.header().buckets, 32U);
  EXPECT_EQ(enc.header().space_fingerprint, space.fingerprint());
  EXPECT_NE(space.fingerprint(), WitnessSpace::boolean_space(101).fingerprint());
}

Encoding sample(MonoidKind kind, std::uint64_t seed, std::uint64_t n) {
  testing::Gen gen(seed);
  switch (kind) {
    case MonoidKind::kBoolean:
      return encode(WitnessSpace::boolean_space(200), HashFamily(seed, 2, 200, n), MonoidSpec::boolean(),
                    gen.id_set(200, 60));
    case MonoidKind::kNatural:
      return encode(WitnessSpace::count_space(200, 50), HashFamily(seed, 2, 200, n), MonoidSpec::natural(50),
                    gen.count_map(200, 60, 80));
    case MonoidKind::kReal:
      return encode(WitnessSpace::embedding_space(30), HashFamily(seed, 2, 30, n), MonoidSpec::real(), gen.vector(30));
    case MonoidKind::kTropical: {
      Graph g(20);
      for (std::uint64_t v = 0; v + 1 < 10; ++v) g.add_edge(v, v + 1, gen.uniform(0.1, 3));
      return encode(WitnessSpace::tropical_space(g, {0, 3, 12, 19}, 7.5), HashFamily(seed, 2, 4, n),
                    MonoidSpec::tropical(7.5), VertexId{2});
    }
    case MonoidKind::kProduct:
      break;
  }
  const auto space = WitnessSpace::product_space(WitnessSpace::count_space(40),
                                                 WitnessSpace::product_space(WitnessSpace::boolean_space(20),
                                                                             WitnessSpace::embedding_space(5)));
  const auto spec = product_monoid(MonoidSpec::natural(),
                                   product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), 2, 3), 0.5, 1.5);
  return encode(space, HashFamily(seed, 2, 65, n), spec,
                DataItem::pair(gen.count_map(40, 10, 9), DataItem::pair(gen.id_set(20, 8), gen.vector(5))));
}

TEST(Serialization, RoundTripAllKinds) {
  for (const auto kind : {MonoidKind::kBoolean, MonoidKind::kNatural, MonoidKind::kReal, MonoidKind::kTropical,
                          MonoidKind::kProduct}) {
    for (const std::uint64_t n : {1, 7, 8, 63, 64, 65, 200}) {
      const Encoding enc = sample(kind, 100 + n, n);
      const auto bytes = serialize(enc);
      const Encoding back = deserialize(bytes);
      EXPECT_TRUE(back == enc) << to_string(kind) << " n=" << n;
      EXPECT_EQ(serialize(back), bytes);
    }
  }
}

TEST(Serialization, KeepsInfinityAndNegativeZero) {
  const Encoding t = sample(MonoidKind::kTropical, 5, 16);
  bool saw_inf = false;
  for (std::uint64_t j = 0; j < t.size(); ++j) saw_inf = saw_inf || std::isinf(t.at(j).tropical_value());
  ASSERT_TRUE(saw_inf);
  EXPECT_TRUE(deserialize(serialize(t)) == t);
  const Encoding r = encode(WitnessSpace::embedding_space(1), HashFamily(1, 1, 1, 1), MonoidSpec::real(),
                            DenseVector{{-0.0}});
  const Encoding back = deserialize(serialize(r));
  EXPECT_EQ(std::bit_cast<std::uint64_t>(back.at(0).real_value()), std::bit_cast<std::uint64_t>(r.at(0).real_value()));
}

TEST(Serialization, BooleanPayloadIsBitPacked) {
  const Encoding a = sample(MonoidKind::kBoolean, 1, 64);
  const Encoding b = sample(MonoidKind::kBoolean, 1, 128);
  EXPECT_EQ(serialize(b).size() - serialize(a).size(), 8U);
  // Header: magic 4, version 2, kind 1, seed 8, K 4, m 8, n 8, base 8, fingerprint 8.
  EXPECT_EQ(serialize(a).size(), 4U + 2 + 1 + 8 + 4 + 8 + 8 + 8 + 8 + 8);
}

TEST(Serialization, ByteLayout) {
  const Encoding enc = encode(WitnessSpace::boolean_space(4), HashFamily(0x0102030405060708ULL, 1, 4, 9),
                              MonoidSpec::boolean(), IdSet{{0, 1, 2, 3}});
  const auto bytes = serialize(enc);
  ASSERT_EQ(bytes.size(), 4U + 2 + 1 + 8 + 4 + 8 + 8 + 8 + 8 + 2);
  EXPECT_EQ(std::memcmp(bytes.data(), "REWA", 4), 0);
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 0);                // boolean kind
  EXPECT_EQ(bytes[7], 0x08);             // seed, little-endian
  EXPECT_EQ(bytes[14], 0x01);
  EXPECT_EQ(bytes[15], 1);               // K
  EXPECT_EQ(bytes[19], 4);               // m
  EXPECT_EQ(bytes[27], 9);               // n
  std::uint64_t bits = bytes[bytes.size() - 2] | (std::uint64_t{bytes[bytes.size() - 1]} << 8);
  for (std::uint64_t j = 0; j < 9; ++j) EXPECT_EQ((bits >> j) & 1U, enc.columns()[0].bit(j) ? 1U : 0U);
  EXPECT_EQ(bits >> 9, 0U);
}

TEST(Serialization, EveryTruncationIsRejectedWithOffset) {
  for (const auto kind : {MonoidKind::kBoolean, MonoidKind::kNatural, MonoidKind::kReal, MonoidKind::kTropical,
                          MonoidKind::kProduct}) {
    const auto bytes = serialize(sample(kind, 9, 21));
    for (std::size_t len = 0; len < bytes.size(); ++len) {
      try {
        (void)deserialize(std::span(bytes.data(), len));
        FAIL() << "accepted " << len << " of " << bytes.size() << " bytes";
      } catch (const FormatError& e) {
        EXPECT_LE(e.offset(), len);
      }
    }
  }
}

TEST(Serialization, RejectsCorruption) {
  auto bytes = serialize(sample(MonoidKind::kBoolean, 3, 13));
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW((void)deserialize(bad_magic), FormatError);
  auto bad_version = bytes;
  bad_version[4] = 2;
  EXPECT_THROW((void)deserialize(bad_version), FormatError);
  auto bad_kind = bytes;
  bad_kind[6] = 9;
  EXPECT_THROW((void)deserialize(bad_kind), FormatError);
  auto padding = bytes;
  padding.back() |= 0x80;  // bit 15 lies beyond n = 13
  EXPECT_THROW((void)deserialize(padding), FormatError);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW((void)deserialize(trailing), FormatError);

  auto real = serialize(sample(MonoidKind::kReal, 3, 4));
  const double nan = std::nan("");
  std::memcpy(real.data() + real.size() - 8, &nan, 8);
  EXPECT_THROW((void)deserialize(real), FormatError);
  auto trop = serialize(sample(MonoidKind::kTropical, 3, 4));
  const double neg = -1.0;
  std::memcpy(trop.data() + trop.size() - 8, &neg, 8);
  EXPECT_THROW((void)deserialize(trop), FormatError);
}

TEST(Serialization, CorpusFraming) {
  std::vector<Encoding> corpus;
  for (std::uint64_t s = 0; s < 5; ++s) corpus.push_back(sample(MonoidKind::kNatural, s, 33));
  const auto bytes = serialize_corpus(corpus);
  const auto back = deserialize_corpus(bytes);
  ASSERT_EQ(back.size(), corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) EXPECT_TRUE(back[i] == corpus[i]);
  EXPECT_TRUE(deserialize_corpus({}).empty());
  auto cut = bytes;
  cut.pop_back();
  EXPECT_THROW((void)deserialize_corpus(cut), FormatError);
}

}  // namespace
}  // namespace rewa
