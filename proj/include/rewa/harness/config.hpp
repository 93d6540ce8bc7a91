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

// Experiment configuration. Text form is one `key = value` per line, `#` starts a
// comment, lists are comma separated. Integer grids also accept `start:stop:step`
// (arithmetic) and `start:stop:xratio` (geometric, rounded, deduplicated).

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace rewa::harness {

struct ExperimentConfig {
  std::string instantiation = "boolean";
  std::string method = "all";

  // Planted corpora.
  std::uint64_t corpus_size = 1024;
  std::vector<std::uint64_t> corpus_sizes = {256, 512, 1024, 2048, 4096, 8192, 16384};
  std::uint64_t universe = 10000;
  std::uint64_t base_size = 64;
  std::uint64_t overlap_hi = 32;
  std::uint64_t overlap_lo = 8;
  std::uint64_t share_min = 8;
  std::uint64_t queries = 8;
  std::uint64_t pool_size = 0;
  std::uint64_t dim = 64;
  double gap_cosine = 0.3;
  double neighbor_cosine = 0.9;
  std::uint64_t clip = 100;
  std::vector<std::uint64_t> gap_levels = {16, 8, 4, 2, 1};
  std::vector<std::uint64_t> sweep_grid = {};  // empty: geometric 128 .. 32768, ratio 1.19

  // Encoding and evaluation.
  std::vector<std::uint64_t> n_grid = {};  // empty: 160 .. 400 in steps of 8
  std::uint32_t hashes = 2;
  std::uint64_t trials = 100;
  std::uint64_t k = 1;
  double delta = 0.05;
  std::uint64_t seed = 1;
  std::uint64_t calibration_pairs = 50;

  // Equivalence runs.
  std::uint64_t bloom_universe = 1 << 20;
  std::uint64_t bloom_items = 1000;
  std::uint32_t bloom_hashes = 5;
  std::uint64_t bloom_buckets = 8192;
  std::uint64_t bloom_probes = 100000;
  std::uint64_t bloom_sets = 50;
  std::uint64_t minhash_trials = 10000;
  std::uint64_t minhash_buckets = 64;
  std::uint64_t minhash_union = 200;
  std::vector<double> minhash_jaccards = {0.1, 0.5, 0.9};
  std::uint64_t countmin_keys = 10000;
  std::uint32_t countmin_hashes = 4;
  std::uint64_t countmin_buckets = 2048;
  std::uint64_t countmin_clip = 100;
  double zipf_exponent = 1.1;
  double zipf_scale = 100000.0;
  std::uint64_t rff_dim = 8;
  std::uint64_t rff_features = 4096;
  std::uint64_t rff_pairs = 100;
  std::uint64_t rff_buckets = 65536;
  double rff_bandwidth = 1.0;

  // Two-channel runs.
  double lambda1 = 1.0 / 64.0;
  double lambda2 = 1.0;
  std::uint64_t hybrid_buckets = 2048;
  std::uint64_t hybrid_pairs = 100;

  std::string output;

  [[nodiscard]] std::vector<std::uint64_t> ranking_grid() const;
  [[nodiscard]] std::vector<std::uint64_t> gap_sweep_grid() const;

  // Throws InvalidArgument when an invariant fails (empty or unsorted n grid,
  // trials < 30, delta outside (0, 1), ...).
  void validate() const;
};

// Applies `key = value` lines onto `config`. Throws InvalidArgument naming the
// line for unknown keys or malformed values.
void apply_config(ExperimentConfig& config, std::istream& in);
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

[[nodiscard]] std::vector<std::uint64_t> parse_grid(std::string_view text);

}  // namespace rewa::harness
