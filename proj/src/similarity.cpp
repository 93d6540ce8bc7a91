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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rewa/errors.hpp"

namespace rewa {

namespace {

double leaf_phi(const MonoidSpec& leaf, const Column& a, const Column& b, std::uint64_t j) {
  switch (a.kind) {
    case MonoidKind::kBoolean:
      return (a.bit(j) && b.bit(j)) ? 1.0 : 0.0;
    case MonoidKind::kNatural:
      return static_cast<double>(std::min(a.words[j], b.words[j]));
    case MonoidKind::kReal:
      return a.values[j] * b.values[j];
    case MonoidKind::kTropical:
      return scalar::tropical_phi(a.values[j], b.values[j], leaf.diameter());
    case MonoidKind::kProduct:
      break;
  }
  return 0.0;
}

// phi at bucket j for a (possibly product) spec, consuming leaf columns in order.
double tree_phi(const MonoidSpec& spec, const std::vector<Column>& a, const std::vector<Column>& b,
                std::size_t& cursor, std::uint64_t j) {
  if (spec.kind() != MonoidKind::kProduct) {
    const std::size_t c = cursor++;
    return leaf_phi(spec, a[c], b[c], j);
  }
  const double p1 = tree_phi(spec.first(), a, b, cursor, j);
  const double p2 = tree_phi(spec.second(), a, b, cursor, j);
  return spec.weight1() * p1 + spec.weight2() * p2;
}

bool ranks_before(const ScoredItem& a, const ScoredItem& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

double rewa_similarity(const Encoding& a, const Encoding& b, const MonoidSpec& spec) {
  if (!(a.header() == b.header())) throw IncompatibleEncoding("encodings were built under different headers");
  if (!(a.monoid() == spec)) throw IncompatibleEncoding("monoid spec does not match the encodings");
  const std::uint64_t n = a.size();
  const auto& ca = a.columns();
  const auto& cb = b.columns();

  if (spec.kind() == MonoidKind::kBoolean) {
    // Partial sums of 0/1 terms are exact integers in double.
    std::uint64_t total = 0;
    for (std::size_t w = 0; w < ca[0].words.size(); ++w) total += std::popcount(ca[0].words[w] & cb[0].words[w]);
    return static_cast<double>(total);
  }
  double total = 0.0;
  if (spec.kind() != MonoidKind::kProduct) {
    for (std::uint64_t j = 0; j < n; ++j) total += leaf_phi(spec, ca[0], cb[0], j);
    return total;
  }
  for (std::uint64_t j = 0; j < n; ++j) {
    std::size_t cursor = 0;
    total += tree_phi(spec, ca, cb, cursor, j);
  }
  return total;
}

std::size_t RankedList::rank_of(std::uint64_t id) const noexcept {
  for (std::size_t r = 0; r < items.size(); ++r) {
    if (items[r].id == id) return r;
  }
  return items.size();
}

RankedList topk_scores(std::span<const double> scores, std::size_t k) {
  if (k == 0) throw InvalidArgument("top-k needs k >= 1");
  if (k > scores.size()) throw InvalidArgument("k exceeds corpus size");
  std::vector<ScoredItem> all(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) all[i] = {i, scores[i]};
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), ranks_before);
  all.resize(k);
  return RankedList{std::move(all)};
}

RankedList topk(const Encoding& query, std::span<const Encoding> corpus, const MonoidSpec& spec, std::size_t k) {
  if (k == 0) throw InvalidArgument("top-k needs k >= 1");
  if (k > corpus.size()) throw InvalidArgument("k exceeds corpus size");
  std::vector<double> scores(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) scores[i] = rewa_similarity(query, corpus[i], spec);
  return topk_scores(scores, k);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DegenerateDesign("line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateDesign("all design points share one x value");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0.0) {
    fit.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.slope * x[i] + fit.intercept);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

Calibration calibrate(const WitnessSpace& space, const MonoidSpec& spec, const FamilyGenerator& generator,
                      std::span<const ItemPairRef> pairs, std::uint64_t seeds) {
  if (pairs.size() < kMinCalibrationPairs) throw InvalidArgument("calibration needs at least 10 pairs");
  if (seeds < kMinCalibrationSeeds) throw InvalidArgument("calibration needs at least 30 seeds");

  std::vector<double> delta(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) delta[p] = ideal_overlap(space, spec, *pairs[p].x, *pairs[p].y);
  if (std::all_of(delta.begin(), delta.end(), [&](double d) { return d == delta.front(); })) {
    throw DegenerateDesign("all calibration pairs share one ideal overlap");
  }

  std::vector<double> mean_s(pairs.size(), 0.0);
  for (std::uint64_t s = 0; s < seeds; ++s) {
    const Encoder encoder(space, generator(s), spec);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      mean_s[p] += rewa_similarity(encoder.encode(*pairs[p].x), encoder.encode(*pairs[p].y), spec);
    }
  }
  for (double& v : mean_s) v /= static_cast<double>(seeds);

  const LinearFit fit = fit_line(delta, mean_s);
  return Calibration{.alpha = fit.slope,
                     .beta = fit.intercept,
                     .r_squared = fit.r_squared,
                     .seeds_used = seeds,
                     .pairs_used = pairs.size()};
}

double minhash_jaccard(const Encoding& a, const Encoding& b) {
  if (!(a.header() == b.header())) throw IncompatibleEncoding("encodings were built under different headers");
  if (a.monoid().kind() != MonoidKind::kTropical) throw TypeError("min-hash estimates need Tropical encodings");
  const auto& va = a.columns()[0].values;
  const auto& vb = b.columns()[0].values;
  std::uint64_t equal = 0;
  std::uint64_t occupied = 0;
  for (std::size_t j = 0; j < va.size(); ++j) {
    if (std::isinf(va[j]) && std::isinf(vb[j])) continue;
    ++occupied;
    if (va[j] == vb[j]) ++equal;
  }
  if (occupied == 0) throw InvalidArgument("min-hash estimate of two empty sets is undefined");
  return static_cast<double>(equal) / static_cast<double>(occupied);
}

std::uint64_t count_min_estimate(const Encoding& sketch, const Encoder& encoder, std::uint64_t id) {
  if (!(sketch.header() == encoder.header())) throw IncompatibleEncoding("sketch was built by another encoder");
  if (sketch.monoid().kind() != MonoidKind::kNatural) throw TypeError("count-min queries need Natural encodings");
  const auto& counts = sketch.columns()[0].words;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  for (const std::uint64_t j : encoder.buckets_of(id)) best = std::min(best, counts[j]);
  return best;
}

bool bloom_contains(const Encoding& filter, const Encoder& encoder, std::uint64_t id) {
  if (!(filter.header() == encoder.header())) throw IncompatibleEncoding("filter was built by another encoder");
  if (filter.monoid().kind() != MonoidKind::kBoolean) throw TypeError("membership queries need Boolean encodings");
  const Column& bits = filter.columns()[0];
  for (const std::uint64_t j : encoder.buckets_of(id)) {
    if (!bits.bit(j)) return false;
  }
  return true;
}

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  if (scores.empty()) return out;
  const double peak = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

std::vector<std::size_t> argsort_descending(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace rewa
