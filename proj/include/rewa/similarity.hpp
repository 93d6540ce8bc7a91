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

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "rewa/encoding.hpp"
#include "rewa/hashing.hpp"
#include "rewa/monoid.hpp"
#include "rewa/witness.hpp"

namespace rewa {

// S(a, b) = sum_j phi(a[j], b[j]), accumulated left to right in double.
// Throws IncompatibleEncoding when the headers differ or `spec` is not the
// headers' monoid.
[[nodiscard]] double rewa_similarity(const Encoding& a, const Encoding& b, const MonoidSpec& spec);

struct ScoredItem {
  std::uint64_t id;
  double score;
};

// Descending score, ties by ascending id.
struct RankedList {
  std::vector<ScoredItem> items;

  [[nodiscard]] std::size_t size() const noexcept { return items.size(); }
  // Position of `id` (0-based), or size() when absent.
  [[nodiscard]] std::size_t rank_of(std::uint64_t id) const noexcept;
};

// Exact top-k by full scan. Item ids are corpus positions.
[[nodiscard]] RankedList topk(const Encoding& query, std::span<const Encoding> corpus, const MonoidSpec& spec,
                              std::size_t k);

// Top-k over precomputed scores, same ordering rule.
[[nodiscard]] RankedList topk_scores(std::span<const double> scores, std::size_t k);

struct Calibration {
  double alpha = 0.0;
  double beta = 0.0;
  double r_squared = 0.0;
  std::uint64_t seeds_used = 0;
  std::uint64_t pairs_used = 0;
};

struct ItemPairRef {
  const DataItem* x;
  const DataItem* y;
};

inline constexpr std::size_t kMinCalibrationPairs = 10;
inline constexpr std::uint64_t kMinCalibrationSeeds = 30;

// Least-squares fit of the across-seed mean of S against the exact Delta of each
// pair. Families come from generator(0) .. generator(seeds - 1).
// Throws InvalidArgument below 10 pairs or 30 seeds, DegenerateDesign when all
// pairs share one Delta.
[[nodiscard]] Calibration calibrate(const WitnessSpace& space, const MonoidSpec& spec,
                                    const FamilyGenerator& generator, std::span<const ItemPairRef> pairs,
                                    std::uint64_t seeds);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Ordinary least squares y = slope * x + intercept. Throws DegenerateDesign when
// fewer than two distinct x values are given.
[[nodiscard]] LinearFit fit_line(std::span<const double> x, std::span<const double> y);

// Fraction of buckets holding equal minima among those where either encoding is
// finite: the min-hash Jaccard estimate of two Tropical encodings.
[[nodiscard]] double minhash_jaccard(const Encoding& a, const Encoding& b);

// Count-Min point query on a Natural encoding: min over the K buckets of `id`.
[[nodiscard]] std::uint64_t count_min_estimate(const Encoding& sketch, const Encoder& encoder, std::uint64_t id);

// Membership query on a Boolean encoding: every bucket of `id` is set.
[[nodiscard]] bool bloom_contains(const Encoding& filter, const Encoder& encoder, std::uint64_t id);

[[nodiscard]] std::vector<double> softmax(std::span<const double> scores);

// Indices by descending score, ties by ascending index.
[[nodiscard]] std::vector<std::size_t> argsort_descending(std::span<const double> scores);

}  // namespace rewa
