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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rewa/datagen.hpp"
#include "rewa/harness/config.hpp"
#include "rewa/similarity.hpp"

namespace rewa::harness {

// Family seed of trial t for a run seeded with `seed`.
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept;

struct GridPoint {
  std::uint64_t corpus_size = 0;
  std::uint64_t buckets = 0;
  std::uint64_t successes = 0;
  std::uint64_t attempts = 0;
  double success_rate = 0.0;
  // Across-seed variance of S(q, neighbor), averaged over queries.
  double noise_variance = 0.0;
  double mean_neighbor_score = 0.0;
};

struct CorpusResult {
  std::uint64_t corpus_size = 0;
  double gap = 0.0;
  std::optional<std::uint64_t> minimal_n;  // empty: the grid never reached 1 - delta
  double noise_variance = 0.0;             // at minimal_n, else at the largest n
  std::optional<Calibration> calibration;
  std::optional<double> reference_bound;
  std::vector<std::string> notes;
};

struct RankingReport {
  std::string experiment;
  std::string instantiation;
  double reference_constant = 0.0;
  double witness_bound = 0.0;
  std::uint32_t hashes = 0;
  std::uint64_t k = 0;
  double delta = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t queries = 0;
  std::uint64_t seed = 0;
  std::vector<GridPoint> grid;
  std::vector<CorpusResult> corpora;
  std::optional<LinearFit> log_fit;  // minimal n against ln N
  std::vector<std::string> flags;
};

// Planted dataset, witness space and monoid for a ranking instantiation
// (boolean, natural or real). Throws InvalidArgument for other instantiations.
struct RankingSetup {
  PlantedDataset data;
  WitnessSpace space;
  MonoidSpec spec;
};
[[nodiscard]] RankingSetup ranking_setup(const ExperimentConfig& config, std::uint64_t corpus_size,
                                         std::uint64_t overlap_hi);

// Success rate of exact planted-neighbor retrieval at rank < k over every n of
// `grid` and `config.trials` hash seeds.
[[nodiscard]] std::vector<GridPoint> success_curve(const ExperimentConfig& config, const RankingSetup& setup,
                                                   const std::vector<std::uint64_t>& grid);

// First grid point whose success rate is >= 1 - delta.
[[nodiscard]] std::optional<std::size_t> minimal_index(const std::vector<GridPoint>& curve, double delta);

// C_M L^2 sigma^2 / (alpha^2 Delta^2 K) (ln N + ln k + ln 1/delta).
[[nodiscard]] double reference_bound(double reference_constant, double bound, double variance, double alpha,
                                     double gap, std::uint32_t hashes, std::uint64_t corpus_size,
                                     std::uint64_t k, double delta);

[[nodiscard]] RankingReport run_ranking(const ExperimentConfig& config);
[[nodiscard]] RankingReport run_scaling(const ExperimentConfig& config);

struct GapLevel {
  std::uint64_t gap = 0;
  double verified_gap = 0.0;
  std::optional<std::uint64_t> minimal_n;
  std::vector<GridPoint> grid;
};

struct GapSweepReport {
  std::uint64_t corpus_size = 0;
  std::vector<GapLevel> levels;  // in configured order, largest gap first
  // Reached minimal n strictly increases as the gap shrinks, and no level after
  // an unreached one is reached.
  bool monotone = false;
  // The smallest gap never reached 1 - delta on the grid.
  bool exhausted = false;
};

// Boolean planted sets with overlap_hi = overlap_lo + g for every g in
// config.gap_levels, scored over config.gap_sweep_grid().
[[nodiscard]] GapSweepReport run_gap_sweep(const ExperimentConfig& config);

struct BloomResult {
  std::uint64_t sets = 0;
  std::uint64_t items = 0;
  std::uint32_t hashes = 0;
  std::uint64_t buckets = 0;
  std::uint64_t bit_mismatches = 0;
  std::uint64_t membership_mismatches = 0;  // singleton-encoding query vs textbook query
  std::uint64_t false_negatives = 0;
  std::uint64_t probes = 0;
  std::uint64_t false_positives = 0;
  double measured_rate = 0.0;
  double predicted_rate = 0.0;
  bool passed = false;
};

struct MinHashPoint {
  double exact_jaccard = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
};

struct MinHashResult {
  std::uint64_t trials = 0;
  std::uint64_t buckets = 0;
  std::vector<MinHashPoint> points;
  double identical_estimate = 0.0;
  bool passed = false;
};

struct CountMinResult {
  std::uint64_t keys = 0;
  std::uint32_t hashes = 0;
  std::uint64_t buckets = 0;
  std::uint64_t underestimates = 0;
  std::uint64_t clipped_underestimates = 0;
  double overestimate_p50 = 0.0;
  double overestimate_p90 = 0.0;
  double overestimate_p99 = 0.0;
  double overestimate_max = 0.0;
  double clip_bound = 0.0;
  double clip_max_magnitude = 0.0;
  double log_bound = 0.0;
  double log_max_magnitude = 0.0;
  bool passed = false;
};

struct RffResult {
  std::uint64_t pairs = 0;
  std::uint64_t dim = 0;
  std::uint64_t features = 0;
  std::uint64_t buckets = 0;
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
  bool passed = false;
};

struct EquivalenceReport {
  std::optional<BloomResult> bloom;
  std::optional<MinHashResult> minhash;
  std::optional<CountMinResult> countmin;
  std::optional<RffResult> rff;
  bool passed = false;
};

[[nodiscard]] BloomResult run_bloom(const ExperimentConfig& config);
[[nodiscard]] MinHashResult run_minhash(const ExperimentConfig& config);
[[nodiscard]] CountMinResult run_countmin(const ExperimentConfig& config);
[[nodiscard]] RffResult run_rff(const ExperimentConfig& config);
// config.method selects one method or "all".
[[nodiscard]] EquivalenceReport run_equivalence(const ExperimentConfig& config);

struct PermutationCheck {
  std::string monoid;
  std::uint64_t permutations = 0;
  std::uint64_t differing = 0;  // encodings differing from the ascending-order encoding
};

struct FailureReport {
  std::uint64_t median_permutations = 0;
  std::uint64_t median_distinct = 0;
  bool median_order_dependent = false;
  std::vector<PermutationCheck> associative;
  GapSweepReport sweep;
  bool passed = false;
};

// Running pairwise-median (midpoint) fold of witness values in `order`, K hashes
// into n buckets; empty buckets stay NaN. Exposed for tests.
[[nodiscard]] std::vector<double> median_fold(const Encoder& encoder, const DataItem& x,
                                              const std::vector<std::uint64_t>& order);

[[nodiscard]] FailureReport run_failure_modes(const ExperimentConfig& config);

struct HybridDataset {
  PlantedDataset data;  // items are (IdSet, DenseVector) pairs
  WitnessSpace space;   // product of boolean_space and embedding_space
  double channel1_gap = 0.0;
  double channel2_gap = 0.0;
};

// Each query gets a neighbor of moderate strength in both channels, type-A
// decoys stronger in channel 1 only and type-B decoys stronger in channel 2 only.
[[nodiscard]] HybridDataset hybrid_dataset(const ExperimentConfig& config);

struct HybridReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::uint64_t corpus_size = 0;
  std::uint64_t buckets = 0;
  std::uint64_t trials = 0;
  double combined_gap = 0.0;
  double channel1_gap = 0.0;
  double channel2_gap = 0.0;
  double combined_success = 0.0;
  double channel1_success = 0.0;
  double channel2_success = 0.0;
  std::uint64_t decomposition_pairs = 0;
  double max_relative_deviation = 0.0;
  bool collapse_identical = false;  // lambda = (1, 0) ranks exactly like channel 1
  bool passed = false;
};

[[nodiscard]] HybridReport run_hybrid(const ExperimentConfig& config);

struct LawCheck {
  std::string monoid;
  std::uint64_t triples = 0;
  std::uint64_t associativity_failures = 0;
  std::uint64_t commutativity_failures = 0;
  std::uint64_t identity_failures = 0;
};

// Associativity, commutativity and identity on random triples; Real compares
// within 1e-9 * max(1, |lhs|), everything else exactly.
[[nodiscard]] LawCheck check_monoid_laws(const MonoidSpec& spec, std::uint64_t triples, std::uint64_t seed);

struct SelftestReport {
  std::vector<LawCheck> laws;
  FourwiseReport fourwise;
  FourwiseReport pairwise;  // degraded family, expected to fail the test
  std::vector<std::string> round_trips;  // monoid kinds that round-tripped
  bool truncation_rejected = false;
  bool passed = false;
};

[[nodiscard]] SelftestReport run_selftest(const ExperimentConfig& config);

}  // namespace rewa::harness
