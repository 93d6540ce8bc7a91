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

#include <algorithm>
#include <cmath>
#include <string>

#include "rewa/errors.hpp"

namespace rewa {

std::uint64_t field_draw(std::uint64_t seed, std::uint32_t function, std::uint32_t index) noexcept {
  const std::uint64_t counter = (static_cast<std::uint64_t>(function) << 32) | index;
  const std::uint64_t stream = mix64(seed + 0x9e3779b97f4a7c15ULL);
  // Rejection on the top 61 bits; only the single value p is rejected.
  for (std::uint64_t round = 0;; ++round) {
    const std::uint64_t v = mix64(stream ^ mix64(counter + round * 0xd1b54a32d192ed03ULL)) >> 3;
    if (v < kMersennePrime61) return v;
  }
}

HashFamily::HashFamily(std::uint64_t seed, std::uint32_t num_functions, std::uint64_t universe,
                       std::uint64_t buckets, Independence independence)
    : seed_(seed), universe_(universe), buckets_(buckets), independence_(independence) {
  if (num_functions == 0) throw InvalidArgument("hash family needs K >= 1");
  if (universe == 0) throw InvalidArgument("hash family needs m >= 1");
  if (buckets == 0) throw InvalidArgument("hash family needs n >= 1");
  if (universe >= kMersennePrime61) {
    throw DomainTooLarge("witness universe " + std::to_string(universe) + " does not fit below 2^61 - 1");
  }
  coeffs_.resize(num_functions);
  for (std::uint32_t k = 0; k < num_functions; ++k) {
    auto& a = coeffs_[k];
    std::uint32_t draw = 0;
    for (std::size_t c = 0; c < 3; ++c) a[c] = field_draw(seed, k, draw++);
    do {
      a[3] = field_draw(seed, k, draw++);
    } while (a[3] == 0);
    if (independence == Independence::kPairwise) {
      a[2] = 0;
      a[3] = 0;
    }
  }
}

std::uint64_t HashFamily::eval(std::uint32_t k, std::uint64_t i) const {
  if (k >= coeffs_.size()) throw InvalidArgument("hash function index " + std::to_string(k) + " out of range");
  if (i >= universe_) throw InvalidArgument("witness index " + std::to_string(i) + " out of range");
  return eval_unchecked(k, i);
}

HashFamily HashFamily::slice(std::uint64_t base, std::uint64_t count) const {
  if (count == 0 || base > universe_ || count > universe_ - base) {
    throw InvalidArgument("hash family slice out of range");
  }
  HashFamily out = *this;
  out.index_base_ = index_base_ + base;
  out.universe_ = count;
  return out;
}

FourwiseReport fourwise_moment_test(const FamilyGenerator& generator, std::array<std::uint64_t, 4> inputs,
                                    std::uint64_t trials, std::uint64_t base_seed) {
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      if (inputs[a] == inputs[b]) throw InvalidArgument("four-wise test needs distinct inputs");
    }
  }
  if (trials < kMinFourwiseTrials) {
    throw InvalidArgument("four-wise test needs at least " + std::to_string(kMinFourwiseTrials) + " trials");
  }

  FourwiseReport report;
  report.trials = trials;
  std::vector<std::uint64_t> counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const HashFamily family = generator(mix64(base_seed ^ mix64(t)));
    if (t == 0) {
      report.buckets = family.buckets();
      if (report.buckets > 16) throw InvalidArgument("four-wise test supports at most 16 buckets");
      report.cells = report.buckets * report.buckets * report.buckets * report.buckets;
      counts.assign(report.cells, 0);
    } else if (family.buckets() != report.buckets) {
      throw InvalidArgument("family generator must keep n fixed");
    }
    std::uint64_t cell = 0;
    for (const std::uint64_t x : inputs) cell = cell * report.buckets + family.eval(0, x);
    ++counts[cell];
  }

  const double p = 1.0 / static_cast<double>(report.cells);
  report.expected_per_cell = static_cast<double>(trials) * p;
  report.standard_error = std::sqrt(static_cast<double>(trials) * p * (1.0 - p));
  for (const std::uint64_t c : counts) {
    const double dev = std::abs(static_cast<double>(c) - report.expected_per_cell);
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    const double z = dev / report.standard_error;
    report.max_z = std::max(report.max_z, z);
    if (z > report.threshold_z) ++report.cells_over_threshold;
  }
  report.passed = report.cells_over_threshold == 0;
  return report;
}

}  // namespace rewa
