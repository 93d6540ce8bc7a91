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

#include "rewa/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>

#include "rewa/errors.hpp"

namespace rewa {

namespace {

std::vector<std::uint64_t> sample_without_replacement(std::span<const std::uint64_t> from, std::uint64_t count,
                                                      std::mt19937_64& rng) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::sample(from.begin(), from.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(count), rng);
  return out;
}

std::vector<double> set_overlap_gaps(const PlantedDataset& data) {
  // Boolean Delta is |x & y|.
  std::vector<double> gaps;
  for (std::size_t q = 0; q < data.queries.size(); ++q) {
    const auto& qs = data.queries[q].get_if<IdSet>()->ids;
    auto overlap = [&](const DataItem& w) {
      const auto& ws = w.get_if<IdSet>()->ids;
      std::size_t a = 0;
      std::size_t b = 0;
      std::uint64_t shared = 0;
      while (a < qs.size() && b < ws.size()) {
        if (qs[a] < ws[b]) {
          ++a;
        } else if (ws[b] < qs[a]) {
          ++b;
        } else {
          ++shared;
          ++a;
          ++b;
        }
      }
      return static_cast<double>(shared);
    };
    const double hi = overlap(data.corpus[data.neighbors[q]]);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < data.corpus.size(); ++w) {
      if (w == data.neighbors[q]) continue;
      worst = std::min(worst, hi - overlap(data.corpus[w]));
    }
    gaps.push_back(worst);
  }
  return gaps;
}

}  // namespace

PlantedDataset planted_sets(const SetPlantOptions& o) {
  if (o.overlap_hi <= o.overlap_lo) throw InvalidArgument("planted sets need overlap_hi > overlap_lo");
  if (o.base_size > o.universe) throw InvalidArgument("base_size exceeds the universe");
  if (o.overlap_hi > o.base_size) throw InvalidArgument("overlap_hi exceeds base_size");
  if (o.queries == 0) throw InvalidArgument("planted sets need at least one query");
  if (o.share_min > o.overlap_lo) throw InvalidArgument("share_min exceeds overlap_lo");
  if (o.corpus_size < o.queries + 1) throw InvalidArgument("corpus must hold every neighbor plus a distractor");
  if (o.queries * o.overlap_lo > o.base_size) {
    throw GenerationFailure("distractors cannot share overlap_lo ids with every query within base_size");
  }

  const std::uint64_t pool_size = o.pool_size == 0 ? 4 * o.base_size : o.pool_size;
  if (pool_size < o.base_size) throw InvalidArgument("pool_size must be at least base_size");
  if (o.queries * o.base_size + pool_size > o.universe) {
    throw GenerationFailure("universe of " + std::to_string(o.universe) +
                            " cannot hold disjoint query blocks and the background pool");
  }

  std::mt19937_64 rng(o.seed);
  std::vector<std::uint64_t> ids(o.universe);
  std::iota(ids.begin(), ids.end(), std::uint64_t{0});
  std::shuffle(ids.begin(), ids.end(), rng);

  std::vector<std::span<const std::uint64_t>> blocks;
  for (std::uint64_t q = 0; q < o.queries; ++q) {
    blocks.emplace_back(ids.data() + q * o.base_size, o.base_size);
  }
  const std::span<const std::uint64_t> pool(ids.data() + o.queries * o.base_size, pool_size);

  PlantedDataset data;
  data.seed = o.seed;
  data.gap = static_cast<double>(o.overlap_hi - o.overlap_lo);
  for (const auto& block : blocks) data.queries.emplace_back(IdSet::from_unsorted({block.begin(), block.end()}));

  std::vector<std::uint64_t> slots(o.corpus_size);
  std::iota(slots.begin(), slots.end(), std::uint64_t{0});
  std::shuffle(slots.begin(), slots.end(), rng);
  data.neighbors.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(o.queries));

  std::vector<std::optional<DataItem>> corpus(o.corpus_size);
  for (std::uint64_t q = 0; q < o.queries; ++q) {
    auto members = sample_without_replacement(blocks[q], o.overlap_hi, rng);
    const auto fill = sample_without_replacement(pool, o.base_size - o.overlap_hi, rng);
    members.insert(members.end(), fill.begin(), fill.end());
    corpus[data.neighbors[q]].emplace(IdSet::from_unsorted(std::move(members)));
  }
  std::uniform_int_distribution<std::uint64_t> share(o.share_min, o.overlap_lo);
  for (std::uint64_t slot = 0; slot < o.corpus_size; ++slot) {
    if (corpus[slot].has_value()) continue;
    std::vector<std::uint64_t> members;
    for (std::uint64_t q = 0; q < o.queries; ++q) {
      const auto taken = sample_without_replacement(blocks[q], share(rng), rng);
      members.insert(members.end(), taken.begin(), taken.end());
    }
    const auto fill = sample_without_replacement(pool, o.base_size - members.size(), rng);
    members.insert(members.end(), fill.begin(), fill.end());
    corpus[slot].emplace(IdSet::from_unsorted(std::move(members)));
  }
  data.corpus.reserve(o.corpus_size);
  for (auto& item : corpus) data.corpus.push_back(std::move(*item));

  data.query_gaps = set_overlap_gaps(data);
  data.verified_gap = *std::min_element(data.query_gaps.begin(), data.query_gaps.end());
  if (data.verified_gap < data.gap) {
    throw GenerationFailure("planted gap did not verify: " + std::to_string(data.verified_gap));
  }
  return data;
}

PlantedDataset as_count_maps(const PlantedDataset& sets) {
  auto convert = [](const DataItem& item) {
    const auto* s = item.get_if<IdSet>();
    if (s == nullptr) throw InvalidArgument("as_count_maps expects an id-set dataset");
    CountMap c;
    c.entries.reserve(s->ids.size());
    for (const std::uint64_t id : s->ids) c.entries.emplace_back(id, 1);
    return DataItem(std::move(c));
  };
  PlantedDataset out;
  out.neighbors = sets.neighbors;
  out.gap = sets.gap;
  out.verified_gap = sets.verified_gap;
  out.query_gaps = sets.query_gaps;
  out.seed = sets.seed;
  for (const auto& item : sets.corpus) out.corpus.push_back(convert(item));
  for (const auto& item : sets.queries) out.queries.push_back(convert(item));
  return out;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> random_unit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    std::vector<double> v(dim);
    for (double& x : v) x = normal(rng);
    const double norm = std::sqrt(dot(v, v));
    if (norm > 1e-12) {
      for (double& x : v) x /= norm;
      return v;
    }
  }
}

// Unit vector at cosine `c` from unit vector q.
std::vector<double> at_cosine(const std::vector<double>& q, double c, std::mt19937_64& rng) {
  if (c >= 1.0) return q;
  std::vector<double> r = random_unit(q.size(), rng);
  const double along = dot(r, q);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= along * q[i];
  const double norm = std::sqrt(dot(r, r));
  const double s = std::sqrt(1.0 - c * c);
  std::vector<double> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out[i] = c * q[i] + s * r[i] / norm;
  const double n2 = std::sqrt(dot(out, out));
  for (double& x : out) x /= n2;
  return out;
}

}  // namespace

PlantedDataset planted_vectors(const VectorPlantOptions& o) {
  if (o.dim < 2) throw InvalidArgument("planted vectors need dim >= 2");
  if (!(o.gap_cosine > 0.0 && o.gap_cosine < 1.0)) throw InvalidArgument("gap_cosine must lie in (0, 1)");
  if (!(o.neighbor_cosine > -1.0 && o.neighbor_cosine <= 1.0)) {
    throw InvalidArgument("neighbor_cosine must lie in (-1, 1]");
  }
  if (o.queries == 0) throw InvalidArgument("planted vectors need at least one query");
  if (o.corpus_size < o.queries + 1) throw InvalidArgument("corpus must hold every neighbor plus a distractor");

  std::mt19937_64 rng(o.seed);
  PlantedDataset data;
  data.seed = o.seed;
  data.gap = o.gap_cosine;

  std::vector<std::vector<double>> queries;
  for (std::uint64_t q = 0; q < o.queries; ++q) queries.push_back(random_unit(o.dim, rng));

  std::vector<std::uint64_t> slots(o.corpus_size);
  std::iota(slots.begin(), slots.end(), std::uint64_t{0});
  std::shuffle(slots.begin(), slots.end(), rng);
  data.neighbors.assign(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(o.queries));

  std::vector<std::vector<double>> corpus(o.corpus_size);
  std::vector<double> neighbor_dot(o.queries);
  for (std::uint64_t q = 0; q < o.queries; ++q) {
    corpus[data.neighbors[q]] = at_cosine(queries[q], o.neighbor_cosine, rng);
    neighbor_dot[q] = dot(queries[q], corpus[data.neighbors[q]]);
  }

  // Every item except query q's own neighbor must sit gap below that neighbor.
  auto acceptable = [&](const std::vector<double>& v, std::uint64_t own_query) {
    for (std::uint64_t q = 0; q < o.queries; ++q) {
      if (q == own_query) continue;
      if (neighbor_dot[q] - dot(queries[q], v) < o.gap_cosine) return false;
    }
    return true;
  };
  for (std::uint64_t q = 0; q < o.queries; ++q) {
    if (!acceptable(corpus[data.neighbors[q]], q)) {
      throw GenerationFailure("planted neighbor of query " + std::to_string(q) + " crowds another query");
    }
  }
  const std::uint64_t none = o.queries;
  for (std::uint64_t slot = 0; slot < o.corpus_size; ++slot) {
    if (!corpus[slot].empty()) continue;
    bool placed = false;
    for (std::uint64_t attempt = 0; attempt < o.max_attempts && !placed; ++attempt) {
      std::vector<double> v = random_unit(o.dim, rng);
      if (acceptable(v, none)) {
        corpus[slot] = std::move(v);
        placed = true;
      }
    }
    if (!placed) {
      throw GenerationFailure("no distractor at cosine gap " + std::to_string(o.gap_cosine) + " found in " +
                              std::to_string(o.max_attempts) + " draws (dim " + std::to_string(o.dim) + ")");
    }
  }

  for (auto& q : queries) data.queries.emplace_back(DenseVector{std::move(q)});
  for (auto& v : corpus) data.corpus.emplace_back(DenseVector{std::move(v)});
  data.query_gaps = query_gaps(data, WitnessSpace::embedding_space(o.dim), MonoidSpec::real());
  data.verified_gap = *std::min_element(data.query_gaps.begin(), data.query_gaps.end());
  if (data.verified_gap < data.gap) throw GenerationFailure("planted cosine gap did not verify");
  return data;
}

std::vector<double> query_gaps(const PlantedDataset& data, const WitnessSpace& space, const MonoidSpec& spec) {
  std::vector<double> gaps;
  for (std::size_t q = 0; q < data.queries.size(); ++q) {
    const double hi = ideal_overlap(space, spec, data.queries[q], data.corpus[data.neighbors[q]]);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t w = 0; w < data.corpus.size(); ++w) {
      if (w == data.neighbors[q]) continue;
      worst = std::min(worst, hi - ideal_overlap(space, spec, data.queries[q], data.corpus[w]));
    }
    gaps.push_back(worst);
  }
  return gaps;
}

double verify_gap(const PlantedDataset& data, const WitnessSpace& space, const MonoidSpec& spec) {
  const std::vector<double> gaps = query_gaps(data, space, spec);
  return *std::min_element(gaps.begin(), gaps.end());
}

Graph random_graph(std::uint64_t vertices, std::uint64_t edges, double min_weight, double max_weight,
                   std::uint64_t seed) {
  if (vertices == 0) throw InvalidArgument("graph needs at least one vertex");
  if (edges + 1 < vertices) throw InvalidArgument("a connected graph needs E >= V - 1");
  if (edges > vertices * (vertices - 1) / 2) throw InvalidArgument("more edges than a simple graph holds");
  if (!(min_weight >= 0.0 && max_weight >= min_weight && std::isfinite(max_weight))) {
    throw InvalidArgument("edge weight range must be finite, non-negative and ordered");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(min_weight, max_weight);
  Graph g(vertices);
  std::set<std::pair<std::uint64_t, std::uint64_t>> present;
  auto connect = [&](std::uint64_t u, std::uint64_t v) {
    g.add_edge(u, v, min_weight == max_weight ? min_weight : weight(rng));
    present.emplace(std::min(u, v), std::max(u, v));
  };

  std::vector<std::uint64_t> order(vertices);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (std::uint64_t p = 1; p < vertices; ++p) {
    std::uniform_int_distribution<std::uint64_t> parent(0, p - 1);
    connect(order[parent(rng)], order[p]);
  }
  std::uniform_int_distribution<std::uint64_t> vertex(0, vertices - 1);
  while (g.edges().size() < edges) {
    const std::uint64_t u = vertex(rng);
    const std::uint64_t v = vertex(rng);
    if (u == v || present.contains({std::min(u, v), std::max(u, v)})) continue;
    connect(u, v);
  }
  return g;
}

std::vector<std::uint64_t> sample_landmarks(std::uint64_t vertices, std::uint64_t count, std::uint64_t seed) {
  if (count == 0 || count > vertices) throw InvalidArgument("landmark count must lie in [1, V]");
  std::vector<std::uint64_t> all(vertices);
  std::iota(all.begin(), all.end(), std::uint64_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  return all;
}

CountMap zipf_counts(std::uint64_t keys, double exponent, double scale, std::uint64_t seed) {
  if (keys == 0) throw InvalidArgument("zipf corpus needs at least one key");
  if (!(exponent > 0.0) || !(scale >= 1.0)) throw InvalidArgument("zipf exponent must be > 0 and scale >= 1");
  std::vector<std::uint64_t> ids(keys);
  std::iota(ids.begin(), ids.end(), std::uint64_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
  entries.reserve(keys);
  for (std::uint64_t r = 0; r < keys; ++r) {
    const double c = std::floor(scale / std::pow(static_cast<double>(r + 1), exponent));
    entries.emplace_back(ids[r], std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c)));
  }
  return CountMap::from_unsorted(std::move(entries));
}

}  // namespace rewa
