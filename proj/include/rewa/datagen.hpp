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

// Seeded synthetic corpora with a planted nearest neighbor and an exactly
// verified similarity gap.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rewa/graph.hpp"
#include "rewa/witness.hpp"

namespace rewa {

struct PlantedDataset {
  std::vector<DataItem> corpus;
  std::vector<DataItem> queries;
  // Corpus index of each query's planted neighbor.
  std::vector<std::uint64_t> neighbors;
  // Requested gap; verified_gap is the exact minimum of
  // Delta(q, neighbor) - Delta(q, w) over queries q and corpus items w != neighbor.
  double gap = 0.0;
  double verified_gap = 0.0;
  // Per-query exact gap; verified_gap is their minimum.
  std::vector<double> query_gaps;
  std::uint64_t seed = 0;
};

struct SetPlantOptions {
  std::uint64_t corpus_size = 256;
  std::uint64_t universe = 10000;
  std::uint64_t base_size = 64;
  std::uint64_t overlap_hi = 32;
  std::uint64_t overlap_lo = 8;
  // Distractors share a uniform share_min..overlap_lo ids with each query.
  std::uint64_t share_min = 0;
  std::uint64_t queries = 1;
  // Background ids shared by all non-query content; 0 means 4 * base_size.
  std::uint64_t pool_size = 0;
  std::uint64_t seed = 0;
};

// Id-set corpus: each query's neighbor shares exactly overlap_hi ids with it,
// every other item shares a uniform share_min..overlap_lo ids with each query, and all
// remaining ids come from a common background pool. Throws InvalidArgument for
// overlap_hi <= overlap_lo or base_size > universe, GenerationFailure when the
// universe cannot hold disjoint query blocks plus the pool.
[[nodiscard]] PlantedDataset planted_sets(const SetPlantOptions& options);

// Same corpus with every id given count 1, so histogram intersection equals set overlap.
[[nodiscard]] PlantedDataset as_count_maps(const PlantedDataset& sets);

struct VectorPlantOptions {
  std::uint64_t corpus_size = 512;
  std::size_t dim = 64;
  double gap_cosine = 0.3;
  double neighbor_cosine = 0.9;
  std::uint64_t queries = 1;
  std::uint64_t seed = 0;
  std::uint64_t max_attempts = 1000;
};

// Unit vectors: each neighbor at cosine neighbor_cosine from its query, every
// other item accepted only if its cosine is at least gap_cosine below. Throws
// InvalidArgument for dim < 2 or gap outside (0, 1), GenerationFailure when an
// item cannot be placed within max_attempts draws.
[[nodiscard]] PlantedDataset planted_vectors(const VectorPlantOptions& options);

// Recomputes the exact gap of `data` under (space, spec); the dataset is valid
// when the result is >= data.gap.
[[nodiscard]] double verify_gap(const PlantedDataset& data, const WitnessSpace& space, const MonoidSpec& spec);
[[nodiscard]] std::vector<double> query_gaps(const PlantedDataset& data, const WitnessSpace& space,
                                             const MonoidSpec& spec);

// Connected undirected graph: a random spanning tree plus uniformly random extra
// edges, weights uniform in [min_weight, max_weight]. Throws InvalidArgument for
// edges < vertices - 1 or more edges than a simple graph holds.
[[nodiscard]] Graph random_graph(std::uint64_t vertices, std::uint64_t edges, double min_weight, double max_weight,
                                 std::uint64_t seed);

// `count` distinct vertices drawn uniformly.
[[nodiscard]] std::vector<std::uint64_t> sample_landmarks(std::uint64_t vertices, std::uint64_t count,
                                                          std::uint64_t seed);

// Zipf-distributed counts: the key of rank r gets max(1, floor(scale / r^exponent)),
// with ranks assigned to ids 0..keys-1 by a seeded shuffle.
[[nodiscard]] CountMap zipf_counts(std::uint64_t keys, double exponent, double scale, std::uint64_t seed);

}  // namespace rewa
