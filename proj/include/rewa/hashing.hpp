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

#pragma once

// Seeded k-wise independent hash family h_1..h_K : [m] -> [n].
//
// Each function is a random polynomial over the Mersenne field GF(2^61 - 1),
// reduced mod n at the end. A degree-3 polynomial with uniformly random
// coefficients is exactly 4-wise independent over the field; the final mod-n
// reduction adds a bias of at most n / p.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rewa {

inline constexpr std::uint64_t kMersennePrime61 = (std::uint64_t{1} << 61) - 1;

// SplitMix64 finalizer. A bijection on 64-bit words.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) noexcept {
  const __uint128_t prod = static_cast<__uint128_t>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(prod & kMersennePrime61);
  std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  std::uint64_t r = lo + hi;
  if (r >= kMersennePrime61) r -= kMersennePrime61;
  return r;
}

[[nodiscard]] constexpr std::uint64_t addmod61(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r = a + b;
  if (r >= kMersennePrime61) r -= kMersennePrime61;
  return r;
}

// Degree of the polynomial family. `kPairwise` zeroes the cubic and quadratic
// coefficients and exists only to contrast against the full family.
enum class Independence : std::uint8_t { kFourWise, kPairwise };

class HashFamily {
 public:
  // Throws InvalidArgument for zero K, m or n, DomainTooLarge for m >= p.
  HashFamily(std::uint64_t seed, std::uint32_t num_functions, std::uint64_t universe,
             std::uint64_t buckets, Independence independence = Independence::kFourWise);

  // Bucket of witness i under function k. Throws InvalidArgument when out of range.
  [[nodiscard]] std::uint64_t eval(std::uint32_t k, std::uint64_t i) const;

  // Unchecked variant for inner loops.
  [[nodiscard]] std::uint64_t eval_unchecked(std::uint32_t k, std::uint64_t i) const noexcept {
    const auto& a = coeffs_[k];
    const std::uint64_t x = i + index_base_;
    std::uint64_t acc = a[3];
    acc = addmod61(mulmod61(acc, x), a[2]);
    acc = addmod61(mulmod61(acc, x), a[1]);
    acc = addmod61(mulmod61(acc, x), a[0]);
    return acc % buckets_;
  }

  // Restriction of this family to witness indices [base, base + count), renumbered
  // from zero. The polynomials are unchanged, so the restriction is a family in its
  // own right with the same independence.
  [[nodiscard]] HashFamily slice(std::uint64_t base, std::uint64_t count) const;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint32_t num_functions() const noexcept { return static_cast<std::uint32_t>(coeffs_.size()); }
  [[nodiscard]] std::uint64_t universe() const noexcept { return universe_; }
  [[nodiscard]] std::uint64_t buckets() const noexcept { return buckets_; }
  [[nodiscard]] std::uint64_t index_base() const noexcept { return index_base_; }
  [[nodiscard]] Independence independence() const noexcept { return independence_; }

  // Coefficients (a0, a1, a2, a3) of function k.
  [[nodiscard]] const std::array<std::uint64_t, 4>& coefficients(std::uint32_t k) const { return coeffs_.at(k); }

 private:
  std::uint64_t seed_;
  std::uint64_t universe_;
  std::uint64_t buckets_;
  std::uint64_t index_base_ = 0;
  Independence independence_;
  std::vector<std::array<std::uint64_t, 4>> coeffs_;
};

// Deterministic counter-based expansion of a seed: draw number `index` of the
// sub-stream owned by function `function`, uniform on [0, p).
[[nodiscard]] std::uint64_t field_draw(std::uint64_t seed, std::uint32_t function, std::uint32_t index) noexcept;

using FamilyGenerator = std::function<HashFamily(std::uint64_t seed)>;

struct FourwiseReport {
  std::uint64_t trials = 0;
  std::uint64_t buckets = 0;
  std::uint64_t cells = 0;
  double expected_per_cell = 0.0;
  double standard_error = 0.0;
  // Largest |observed - expected| over all n^4 joint cells, in counts and in
  // units of the binomial standard error.
  double max_abs_deviation = 0.0;
  double max_z = 0.0;
  std::uint64_t cells_over_threshold = 0;
  double threshold_z = 4.0;
  bool passed = false;
};

inline constexpr std::uint64_t kMinFourwiseTrials = 100000;

// Empirical check of the product condition: builds one family per trial seed
// (seeds 0..trials-1 mixed with `base_seed`) and tabulates the joint bucket of
// the four inputs under function 0. Throws InvalidArgument on duplicate inputs,
// fewer than kMinFourwiseTrials trials, or more than 16 buckets.
[[nodiscard]] FourwiseReport fourwise_moment_test(const FamilyGenerator& generator,
                                                  std::array<std::uint64_t, 4> inputs,
                                                  std::uint64_t trials, std::uint64_t base_seed = 0);

}  // namespace rewa
