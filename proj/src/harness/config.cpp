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

#include "rewa/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "rewa/errors.hpp"

namespace rewa::harness {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("expected an unsigned integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::uint32_t to_u32(std::string_view s) {
  const std::uint64_t v = to_u64(s);
  if (v > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("value too large: " + std::string(s));
  return static_cast<std::uint32_t>(v);
}

double to_double(std::string_view s) {
  // "a/b" fractions are accepted for weights such as 1/64.
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const double den = to_double(trim(s.substr(slash + 1)));
    if (den == 0.0) throw InvalidArgument("division by zero in '" + std::string(s) + "'");
    return to_double(trim(s.substr(0, slash))) / den;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> to_doubles(std::string_view s) {
  std::vector<double> out;
  for (const auto part : split(s, ',')) out.push_back(to_double(part));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"instantiation", [](auto& c, auto v) { c.instantiation = std::string(v); }},
      {"method", [](auto& c, auto v) { c.method = std::string(v); }},
      {"corpus_size", [](auto& c, auto v) { c.corpus_size = to_u64(v); }},
      {"corpus_sizes", [](auto& c, auto v) { c.corpus_sizes = parse_grid(v); }},
      {"universe", [](auto& c, auto v) { c.universe = to_u64(v); }},
      {"base_size", [](auto& c, auto v) { c.base_size = to_u64(v); }},
      {"overlap_hi", [](auto& c, auto v) { c.overlap_hi = to_u64(v); }},
      {"overlap_lo", [](auto& c, auto v) { c.overlap_lo = to_u64(v); }},
      {"share_min", [](auto& c, auto v) { c.share_min = to_u64(v); }},
      {"queries", [](auto& c, auto v) { c.queries = to_u64(v); }},
      {"pool_size", [](auto& c, auto v) { c.pool_size = to_u64(v); }},
      {"dim", [](auto& c, auto v) { c.dim = to_u64(v); }},
      {"gap_cosine", [](auto& c, auto v) { c.gap_cosine = to_double(v); }},
      {"neighbor_cosine", [](auto& c, auto v) { c.neighbor_cosine = to_double(v); }},
      {"clip", [](auto& c, auto v) { c.clip = to_u64(v); }},
      {"sweep_grid", [](auto& c, auto v) { c.sweep_grid = parse_grid(v); }},
      {"bloom_universe", [](auto& c, auto v) { c.bloom_universe = to_u64(v); }},
      {"gap_levels", [](auto& c, auto v) { c.gap_levels = parse_grid(v); }},
      {"n_grid", [](auto& c, auto v) { c.n_grid = parse_grid(v); }},
      {"hashes", [](auto& c, auto v) { c.hashes = to_u32(v); }},
      {"trials", [](auto& c, auto v) { c.trials = to_u64(v); }},
      {"k", [](auto& c, auto v) { c.k = to_u64(v); }},
      {"delta", [](auto& c, auto v) { c.delta = to_double(v); }},
      {"seed", [](auto& c, auto v) { c.seed = to_u64(v); }},
      {"calibration_pairs", [](auto& c, auto v) { c.calibration_pairs = to_u64(v); }},
      {"bloom_items", [](auto& c, auto v) { c.bloom_items = to_u64(v); }},
      {"bloom_hashes", [](auto& c, auto v) { c.bloom_hashes = to_u32(v); }},
      {"bloom_buckets", [](auto& c, auto v) { c.bloom_buckets = to_u64(v); }},
      {"bloom_probes", [](auto& c, auto v) { c.bloom_probes = to_u64(v); }},
      {"bloom_sets", [](auto& c, auto v) { c.bloom_sets = to_u64(v); }},
      {"minhash_trials", [](auto& c, auto v) { c.minhash_trials = to_u64(v); }},
      {"minhash_buckets", [](auto& c, auto v) { c.minhash_buckets = to_u64(v); }},
      {"minhash_union", [](auto& c, auto v) { c.minhash_union = to_u64(v); }},
      {"minhash_jaccards", [](auto& c, auto v) { c.minhash_jaccards = to_doubles(v); }},
      {"countmin_keys", [](auto& c, auto v) { c.countmin_keys = to_u64(v); }},
      {"countmin_hashes", [](auto& c, auto v) { c.countmin_hashes = to_u32(v); }},
      {"countmin_buckets", [](auto& c, auto v) { c.countmin_buckets = to_u64(v); }},
      {"countmin_clip", [](auto& c, auto v) { c.countmin_clip = to_u64(v); }},
      {"zipf_exponent", [](auto& c, auto v) { c.zipf_exponent = to_double(v); }},
      {"zipf_scale", [](auto& c, auto v) { c.zipf_scale = to_double(v); }},
      {"rff_dim", [](auto& c, auto v) { c.rff_dim = to_u64(v); }},
      {"rff_features", [](auto& c, auto v) { c.rff_features = to_u64(v); }},
      {"rff_pairs", [](auto& c, auto v) { c.rff_pairs = to_u64(v); }},
      {"rff_buckets", [](auto& c, auto v) { c.rff_buckets = to_u64(v); }},
      {"rff_bandwidth", [](auto& c, auto v) { c.rff_bandwidth = to_double(v); }},
      {"lambda1", [](auto& c, auto v) { c.lambda1 = to_double(v); }},
      {"lambda2", [](auto& c, auto v) { c.lambda2 = to_double(v); }},
      {"hybrid_buckets", [](auto& c, auto v) { c.hybrid_buckets = to_u64(v); }},
      {"hybrid_pairs", [](auto& c, auto v) { c.hybrid_pairs = to_u64(v); }},
      {"output", [](auto& c, auto v) { c.output = std::string(v); }},
  };
  return table;
}

}  // namespace

std::vector<std::uint64_t> parse_grid(std::string_view text) {
  text = trim(text);
  std::vector<std::uint64_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidArgument("range grids are start:stop:step or start:stop:xratio");
    const std::uint64_t start = to_u64(parts[0]);
    const std::uint64_t stop = to_u64(parts[1]);
    if (start == 0 || stop < start) throw InvalidArgument("range grid needs 0 < start <= stop");
    if (!parts[2].empty() && parts[2].front() == 'x') {
      const double ratio = to_double(parts[2].substr(1));
      if (!(ratio > 1.0)) throw InvalidArgument("geometric grid ratio must exceed 1");
      for (double v = static_cast<double>(start); v <= static_cast<double>(stop) * (1 + 1e-12); v *= ratio) {
        const auto n = static_cast<std::uint64_t>(std::llround(v));
        if (out.empty() || n > out.back()) out.push_back(n);
      }
    } else {
      const std::uint64_t step = to_u64(parts[2]);
      if (step == 0) throw InvalidArgument("range grid step must be positive");
      for (std::uint64_t v = start; v <= stop; v += step) out.push_back(v);
    }
    return out;
  }
  for (const auto part : split(text, ',')) {
    out.push_back(to_u64(part));
    if (out.back() == 0) throw InvalidArgument("grid values must be positive");
  }
  return out;
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw InvalidArgument("unknown config key '" + std::string(key) + "'");
  it->second(config, value);
}

void apply_config(ExperimentConfig& config, std::istream& in) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      apply_setting(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

namespace {

void check_grid(const std::vector<std::uint64_t>& grid, const char* name) {
  if (grid.empty()) throw InvalidArgument(std::string(name) + " must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw InvalidArgument(std::string(name) + " must be positive and strictly ascending");
    }
  }
}

}  // namespace

std::vector<std::uint64_t> ExperimentConfig::ranking_grid() const {
  return n_grid.empty() ? parse_grid("160:400:8") : n_grid;
}

std::vector<std::uint64_t> ExperimentConfig::gap_sweep_grid() const {
  return sweep_grid.empty() ? parse_grid("128:32768:x1.19") : sweep_grid;
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> kinds = {"boolean", "natural", "real", "tropical", "product"};
  if (std::find(kinds.begin(), kinds.end(), instantiation) == kinds.end()) {
    throw InvalidArgument("unknown instantiation '" + instantiation + "'");
  }
  static const std::vector<std::string> methods = {"all", "bloom", "minhash", "countmin", "rff"};
  if (std::find(methods.begin(), methods.end(), method) == methods.end()) {
    throw InvalidArgument("unknown equivalence method '" + method + "'");
  }
  check_grid(ranking_grid(), "n_grid");
  check_grid(gap_sweep_grid(), "sweep_grid");
  check_grid(corpus_sizes, "corpus_sizes");
  if (gap_levels.empty()) throw InvalidArgument("gap_levels must not be empty");
  if (trials < 30) throw InvalidArgument("trials must be >= 30");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (k == 0) throw InvalidArgument("k must be >= 1");
  if (hashes == 0) throw InvalidArgument("hashes must be >= 1");
  if (queries == 0) throw InvalidArgument("queries must be >= 1");
}

}  // namespace rewa::harness
