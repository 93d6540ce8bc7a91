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

#include "rewa/hashing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "generators.hpp"
#include "rewa/errors.hpp"

namespace rewa {
namespace {

constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

// Reference evaluation with 128-bit remainders instead of the Mersenne folding trick.
std::uint64_t oracle_eval(const std::array<std::uint64_t, 4>& a, std::uint64_t x, std::uint64_t n) {
  using u128 = unsigned __int128;
  const u128 xp = x % kP;
  u128 acc = 0;
  u128 power = 1;
  for (int d = 0; d < 4; ++d) {
    acc = (acc + (u128(a[d]) * power) % kP) % kP;
    power = (power * xp) % kP;
  }
  return static_cast<std::uint64_t>(acc % n);
}

TEST(Hashing, MulmodMatchesWideRemainder) {
  testing::Gen gen(11);
  for (int t = 0; t < 100000; ++t) {
    const std::uint64_t a = gen.u64() % kP;
    const std::uint64_t b = gen.u64() % kP;
    const auto expected = static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kP);
    ASSERT_EQ(mulmod61(a, b), expected);
    ASSERT_EQ(addmod61(a, b), (a + b) % kP);
  }
  EXPECT_EQ(mulmod61(kP - 1, kP - 1), 1U);
}

TEST(Hashing, ConstructorContract) {
  const HashFamily f(7, 3, 100, 64);
  EXPECT_EQ(f.num_functions(), 3U);
  EXPECT_EQ(f.universe(), 100U);
  EXPECT_EQ(f.buckets(), 64U);
  for (std::uint32_t k = 0; k < 3; ++k) {
    for (std::uint64_t i = 0; i < 100; ++i) EXPECT_LT(f.eval(k, i), 64U);
  }
  EXPECT_EQ(f.eval(1, 42), f.eval(1, 42));
  EXPECT_EQ(HashFamily(7, 3, 100, 64).eval(1, 42), f.eval(1, 42));
}

TEST(Hashing, RejectsBadParameters) {
  EXPECT_THROW(HashFamily(7, 0, 100, 64), InvalidArgument);
  EXPECT_THROW(HashFamily(7, 3, 0, 64), InvalidArgument);
  EXPECT_THROW(HashFamily(7, 3, 100, 0), InvalidArgument);
  EXPECT_THROW(HashFamily(7, 3, kP, 64), DomainTooLarge);
  EXPECT_NO_THROW(HashFamily(7, 3, kP - 1, 64));
  const HashFamily f(7, 3, 100, 64);
  EXPECT_THROW((void)f.eval(3, 0), InvalidArgument);
  EXPECT_THROW((void)f.eval(0, 100), InvalidArgument);
}

TEST(Hashing, SingleBucketMapsEverythingToZero) {
  const HashFamily f(99, 4, 1000, 1);
  for (std::uint32_t k = 0; k < 4; ++k) {
    for (std::uint64_t i = 0; i < 1000; ++i) ASSERT_EQ(f.eval(k, i), 0U);
  }
}

TEST(Hashing, PinnedValuesAreStable) {
  // Golden values guard the seed expansion and polynomial layout against drift.
  const HashFamily f(7, 3, 100, 64);
  EXPECT_EQ(f.eval(0, 0), 56U);
  EXPECT_EQ(f.eval(1, 42), 55U);
  EXPECT_EQ(f.eval(2, 99), 21U);
  EXPECT_EQ(field_draw(7, 1, 2), 2257657505283807568ULL);
  EXPECT_NE(field_draw(7, 1, 2), field_draw(7, 2, 2));
}

TEST(Hashing, EvalMatchesPolynomialOracle) {
  testing::Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t n = gen.between(1, 1 << 20);
    const HashFamily f(gen.u64(), 4, 1 << 16, n);
    for (std::uint32_t k = 0; k < 4; ++k) {
      const auto& a = f.coefficients(k);
      EXPECT_NE(a[3], 0U);
      for (auto c : a) EXPECT_LT(c, kP);
      for (int s = 0; s < 200; ++s) {
        const std::uint64_t i = gen.below(1 << 16);
        ASSERT_EQ(f.eval(k, i), oracle_eval(a, i, n));
      }
    }
  }
}

TEST(Hashing, PairwiseVariantDropsHighCoefficients) {
  const HashFamily f(3, 5, 100, 17, Independence::kPairwise);
  for (std::uint32_t k = 0; k < 5; ++k) {
    EXPECT_EQ(f.coefficients(k)[2], 0U);
    EXPECT_EQ(f.coefficients(k)[3], 0U);
  }
}

TEST(Hashing, FunctionsUseDistinctCoefficients) {
  const HashFamily f(1234, 16, 10, 10);
  std::set<std::array<std::uint64_t, 4>> seen;
  for (std::uint32_t k = 0; k < 16; ++k) seen.insert(f.coefficients(k));
  EXPECT_EQ(seen.size(), 16U);
}

TEST(Hashing, SliceRenumbersWitnesses) {
  const HashFamily f(77, 3, 1000, 97);
  const HashFamily s = f.slice(200, 300);
  EXPECT_EQ(s.universe(), 300U);
  EXPECT_EQ(s.index_base(), 200U);
  for (std::uint32_t k = 0; k < 3; ++k) {
    for (std::uint64_t i = 0; i < 300; ++i) ASSERT_EQ(s.eval(k, i), f.eval(k, 200 + i));
  }
  const HashFamily ss = s.slice(10, 5);
  EXPECT_EQ(ss.eval(2, 4), f.eval(2, 214));
  EXPECT_THROW((void)f.slice(900, 101), InvalidArgument);
  EXPECT_THROW((void)f.slice(0, 0), InvalidArgument);
}

TEST(Hashing, MarginalIsUniformOverSeeds) {
  constexpr std::uint64_t kTrials = 1000000;
  constexpr std::uint64_t kBuckets = 8;
  std::vector<std::uint64_t> counts(kBuckets, 0);
  for (std::uint64_t t = 0; t < kTrials; ++t) ++counts[HashFamily(mix64(t), 1, 100, kBuckets).eval(0, 42)];
  const double p = 1.0 / kBuckets;
  const double se = std::sqrt(kTrials * p * (1 - p));
  for (const auto c : counts) EXPECT_LT(std::abs(static_cast<double>(c) - kTrials * p), 4 * se);
}

TEST(Hashing, PairCollisionRateIsOneOverN) {
  constexpr std::uint64_t kTrials = 400000;
  constexpr std::uint64_t kBuckets = 16;
  std::uint64_t collisions = 0;
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    const HashFamily f(mix64(t + 17), 1, 1000, kBuckets);
    collisions += f.eval(0, 3) == f.eval(0, 977);
  }
  const double p = 1.0 / kBuckets;
  EXPECT_LT(std::abs(static_cast<double>(collisions) - kTrials * p), 4 * std::sqrt(kTrials * p * (1 - p)));
}

TEST(Hashing, FourwiseTestPassesCubicAndCatchesPairwise) {
  const std::array<std::uint64_t, 4> inputs = {0, 1, 2, 3};
  const auto cubic = fourwise_moment_test([](std::uint64_t s) { return HashFamily(s, 1, 64, 4); }, inputs, 1000000);
  EXPECT_TRUE(cubic.passed) << cubic.max_z;
  EXPECT_EQ(cubic.cells, 256U);
  const auto pairwise = fourwise_moment_test(
      [](std::uint64_t s) { return HashFamily(s, 1, 64, 4, Independence::kPairwise); }, inputs, 1000000);
  EXPECT_FALSE(pairwise.passed);
  EXPECT_GT(pairwise.cells_over_threshold, 0U);
}

TEST(Hashing, FourwiseTestPreconditions) {
  const FamilyGenerator gen = [](std::uint64_t s) { return HashFamily(s, 1, 64, 4); };
  EXPECT_THROW((void)fourwise_moment_test(gen, {0, 1, 2, 3}, 10), InvalidArgument);
  EXPECT_THROW((void)fourwise_moment_test(gen, {0, 1, 1, 3}, kMinFourwiseTrials), InvalidArgument);
  const FamilyGenerator wide = [](std::uint64_t s) { return HashFamily(s, 1, 64, 17); };
  EXPECT_THROW((void)fourwise_moment_test(wide, {0, 1, 2, 3}, kMinFourwiseTrials), InvalidArgument);
}

}  // namespace
}  // namespace rewa
