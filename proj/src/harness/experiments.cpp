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

#include "rewa/harness/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "rewa/encoding.hpp"
#include "rewa/errors.hpp"

namespace rewa::harness {

namespace {

// Stream salts keep the hash, priority and dataset randomness of one run apart.
constexpr std::uint64_t kCalibrationSalt = 0x63616c6962726174ULL;
constexpr std::uint64_t kBloomSalt = 0x626c6f6f6d000000ULL;
constexpr std::uint64_t kMinHashSalt = 0x6d696e6861736800ULL;
constexpr std::uint64_t kPrioritySalt = 0x7072696f72697479ULL;
constexpr std::uint64_t kCountMinSalt = 0x636f756e746d696eULL;
constexpr std::uint64_t kRffSalt = 0x7266660000000000ULL;
constexpr std::uint64_t kFailureSalt = 0x6661696c75726500ULL;
constexpr std::uint64_t kHybridSalt = 0x6879627269640000ULL;
constexpr std::uint64_t kSelftestSalt = 0x73656c6674657374ULL;

std::vector<Encoding> encode_all(const Encoder& encoder, const std::vector<DataItem>& items) {
  std::vector<Encoding> out;
  out.reserve(items.size());
  for (const auto& x : items) out.push_back(encoder.encode(x));
  return out;
}

void score_against(const Encoding& query, const std::vector<Encoding>& corpus, const MonoidSpec& spec,
                   std::vector<double>& scores) {
  scores.resize(corpus.size());
  for (std::size_t w = 0; w < corpus.size(); ++w) scores[w] = rewa_similarity(query, corpus[w], spec);
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

// Query-neighbor pairs first, then each query against its first distractor, then
// consecutive corpus items, until `count` pairs are collected.
std::vector<ItemPairRef> calibration_pairs(const PlantedDataset& d, std::uint64_t count) {
  std::vector<ItemPairRef> pairs;
  const std::size_t q_count = d.queries.size();
  for (std::size_t q = 0; q < q_count && pairs.size() < count; ++q) {
    pairs.push_back({&d.queries[q], &d.corpus[d.neighbors[q]]});
  }
  for (std::size_t q = 0; q < q_count && pairs.size() < count; ++q) {
    for (std::size_t w = 0; w < d.corpus.size(); ++w) {
      if (w != d.neighbors[q]) {
        pairs.push_back({&d.queries[q], &d.corpus[w]});
        break;
      }
    }
  }
  for (std::size_t w = 0; w + 1 < d.corpus.size() && pairs.size() < count; ++w) {
    pairs.push_back({&d.corpus[w], &d.corpus[w + 1]});
  }
  return pairs;
}

CorpusResult summarize(const ExperimentConfig& config, const RankingSetup& setup, const std::vector<GridPoint>& curve) {
  CorpusResult out;
  out.corpus_size = setup.data.corpus.size();
  out.gap = setup.data.verified_gap;
  const auto index = minimal_index(curve, config.delta);
  const GridPoint& at = index ? curve[*index] : curve.back();
  if (index) {
    out.minimal_n = at.buckets;
  } else {
    out.notes.push_back("minimal n not reached on the grid; statistics taken at the largest n");
  }
  out.noise_variance = at.noise_variance;

  const auto pairs = calibration_pairs(setup.data, config.calibration_pairs);
  const std::uint64_t m = setup.space.size();
  const std::uint32_t hashes = config.hashes;
  const std::uint64_t n = at.buckets;
  const std::uint64_t seed = config.seed ^ kCalibrationSalt;
  try {
    out.calibration = calibrate(
        setup.space, setup.spec,
        [&](std::uint64_t s) { return HashFamily(trial_seed(seed, s), hashes, m, n); }, pairs,
        config.trials);
  } catch (const DegenerateDesign& e) {
    out.notes.push_back(std::string("calibration skipped: ") + e.what());
  } catch (const InvalidArgument& e) {
    out.notes.push_back(std::string("calibration skipped: ") + e.what());
  }
  if (out.calibration && out.calibration->alpha > 0.0 && out.gap > 0.0) {
    out.reference_bound = reference_bound(setup.spec.reference_constant(), setup.space.bound(), out.noise_variance,
                                          out.calibration->alpha, out.gap, config.hashes, out.corpus_size,
                                          config.k, config.delta);
  } else {
    out.notes.push_back("reference bound needs alpha > 0 and a positive gap");
  }
  return out;
}

RankingReport report_shell(const ExperimentConfig& config, std::string experiment) {
  RankingReport r;
  r.experiment = std::move(experiment);
  r.instantiation = config.instantiation;
  r.hashes = config.hashes;
  r.k = config.k;
  r.delta = config.delta;
  r.trials = config.trials;
  r.queries = config.queries;
  r.seed = config.seed;
  return r;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return mix64(mix64(seed) + trial);
}

RankingSetup ranking_setup(const ExperimentConfig& config, std::uint64_t corpus_size, std::uint64_t overlap_hi) {
  if (config.instantiation == "boolean" || config.instantiation == "natural") {
    SetPlantOptions o;
    o.corpus_size = corpus_size;
    o.universe = config.universe;
    o.base_size = config.base_size;
    o.overlap_hi = overlap_hi;
    o.overlap_lo = config.overlap_lo;
    o.share_min = config.share_min;
    o.queries = config.queries;
    o.pool_size = config.pool_size;
    o.seed = config.seed;
    PlantedDataset sets = planted_sets(o);
    if (config.instantiation == "boolean") {
      return {std::move(sets), WitnessSpace::boolean_space(config.universe), MonoidSpec::boolean()};
    }
    return {as_count_maps(sets), WitnessSpace::count_space(config.universe, config.clip),
            MonoidSpec::natural(config.clip)};
  }
  if (config.instantiation == "real") {
    VectorPlantOptions o;
    o.corpus_size = corpus_size;
    o.dim = config.dim;
    o.gap_cosine = config.gap_cosine;
    o.neighbor_cosine = config.neighbor_cosine;
    o.queries = config.queries;
    o.seed = config.seed;
    return {planted_vectors(o), WitnessSpace::embedding_space(config.dim), MonoidSpec::real()};
  }
  throw InvalidArgument("ranking runs support the boolean, natural and real instantiations, not '" +
                        config.instantiation + "'");
}

std::vector<GridPoint> success_curve(const ExperimentConfig& config, const RankingSetup& setup,
                                     const std::vector<std::uint64_t>& grid) {
  const auto& d = setup.data;
  const std::size_t q_count = d.queries.size();
  if (config.k > d.corpus.size()) throw InvalidArgument("k exceeds the corpus size");
  std::vector<GridPoint> curve;
  std::vector<double> scores;
  for (const std::uint64_t n : grid) {
    GridPoint p;
    p.corpus_size = d.corpus.size();
    p.buckets = n;
    std::vector<std::vector<double>> neighbor_scores(q_count);
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      const Encoder encoder(setup.space, HashFamily(trial_seed(config.seed, t), config.hashes, setup.space.size(), n),
                            setup.spec);
      const auto corpus = encode_all(encoder, d.corpus);
      for (std::size_t q = 0; q < q_count; ++q) {
        score_against(encoder.encode(d.queries[q]), corpus, setup.spec, scores);
        const RankedList top = topk_scores(scores, config.k);
        if (top.rank_of(d.neighbors[q]) < config.k) ++p.successes;
        ++p.attempts;
        neighbor_scores[q].push_back(scores[d.neighbors[q]]);
      }
    }
    p.success_rate = static_cast<double>(p.successes) / static_cast<double>(p.attempts);
    double var = 0.0;
    double mean = 0.0;
    for (const auto& s : neighbor_scores) {
      var += sample_variance(s);
      mean += std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    }
    p.noise_variance = var / static_cast<double>(q_count);
    p.mean_neighbor_score = mean / static_cast<double>(q_count);
    curve.push_back(p);
  }
  return curve;
}

std::optional<std::size_t> minimal_index(const std::vector<GridPoint>& curve, double delta) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].success_rate >= 1.0 - delta) return i;
  }
  return std::nullopt;
}

double reference_bound(double reference_constant, double bound, double variance, double alpha, double gap,
                       std::uint32_t hashes, std::uint64_t corpus_size, std::uint64_t k, double delta) {
  const double log_terms = std::log(static_cast<double>(corpus_size)) + std::log(static_cast<double>(k)) +
                           std::log(1.0 / delta);
  return reference_constant * bound * bound * variance / (alpha * alpha * gap * gap * static_cast<double>(hashes)) *
         log_terms;
}

RankingReport run_ranking(const ExperimentConfig& config) {
  config.validate();
  RankingReport r = report_shell(config, "ranking");
  const RankingSetup setup = ranking_setup(config, config.corpus_size, config.overlap_hi);
  r.reference_constant = setup.spec.reference_constant();
  r.witness_bound = setup.space.bound();
  r.grid = success_curve(config, setup, config.ranking_grid());
  r.corpora.push_back(summarize(config, setup, r.grid));
  if (!r.corpora.back().minimal_n) r.flags.push_back("minimal_n_not_reached");
  r.flags.push_back("log_fit_omitted_single_corpus_size");
  return r;
}

RankingReport run_scaling(const ExperimentConfig& config) {
  config.validate();
  RankingReport r = report_shell(config, "scaling");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const std::uint64_t corpus_size : config.corpus_sizes) {
    const RankingSetup setup = ranking_setup(config, corpus_size, config.overlap_hi);
    r.reference_constant = setup.spec.reference_constant();
    r.witness_bound = setup.space.bound();
    const auto curve = success_curve(config, setup, config.ranking_grid());
    r.grid.insert(r.grid.end(), curve.begin(), curve.end());
    r.corpora.push_back(summarize(config, setup, curve));
    if (const auto& n = r.corpora.back().minimal_n) {
      xs.push_back(std::log(static_cast<double>(corpus_size)));
      ys.push_back(static_cast<double>(*n));
    } else {
      r.flags.push_back("minimal_n_not_reached:N=" + std::to_string(corpus_size));
    }
  }
  if (config.corpus_sizes.size() == 1) {
    r.flags.push_back("log_fit_omitted_single_corpus_size");
  } else if (xs.size() < 2) {
    r.flags.push_back("log_fit_omitted_too_few_reached");
  } else {
    r.log_fit = fit_line(xs, ys);
  }
  return r;
}

GapSweepReport run_gap_sweep(const ExperimentConfig& config) {
  config.validate();
  for (std::size_t i = 1; i < config.gap_levels.size(); ++i) {
    if (config.gap_levels[i] >= config.gap_levels[i - 1]) {
      throw InvalidArgument("gap_levels must be strictly descending");
    }
  }
  ExperimentConfig boolean_config = config;
  boolean_config.instantiation = "boolean";
  GapSweepReport out;
  out.corpus_size = config.corpus_size;
  const auto grid = config.gap_sweep_grid();
  for (const std::uint64_t gap : config.gap_levels) {
    const RankingSetup setup = ranking_setup(boolean_config, config.corpus_size, config.overlap_lo + gap);
    GapLevel level;
    level.gap = gap;
    level.verified_gap = setup.data.verified_gap;
    level.grid = success_curve(boolean_config, setup, grid);
    if (const auto i = minimal_index(level.grid, config.delta)) level.minimal_n = level.grid[*i].buckets;
    out.levels.push_back(std::move(level));
  }
  out.monotone = true;
  bool unreached_seen = false;
  std::optional<std::uint64_t> previous;
  for (const auto& level : out.levels) {
    if (!level.minimal_n) {
      unreached_seen = true;
      continue;
    }
    if (unreached_seen || (previous && *level.minimal_n <= *previous)) out.monotone = false;
    previous = level.minimal_n;
  }
  out.exhausted = !out.levels.back().minimal_n.has_value();
  return out;
}

namespace {

std::vector<std::uint64_t> distinct_ids(std::uint64_t count, std::uint64_t universe, std::mt19937_64& rng) {
  if (count > universe) throw InvalidArgument("cannot draw more distinct ids than the universe holds");
  std::set<std::uint64_t> chosen;
  std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
  while (chosen.size() < count) chosen.insert(pick(rng));
  return {chosen.begin(), chosen.end()};
}

// Membership through singleton encodings: every bucket of {id} is set in the
// filter exactly when S({id}, filter) equals S({id}, {id}).
bool singleton_member(const Encoder& encoder, const Encoding& filter, std::uint64_t id) {
  const Encoding single = encoder.encode(IdSet{{id}});
  const MonoidSpec& spec = encoder.spec();
  return rewa_similarity(single, filter, spec) == rewa_similarity(single, single, spec);
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const auto i = static_cast<std::size_t>(std::floor(q * static_cast<double>(sorted.size() - 1)));
  return sorted[i];
}

DenseVector gaussian_vector(std::size_t dim, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  DenseVector v;
  v.values.resize(dim);
  for (auto& x : v.values) x = normal(rng);
  return v;
}

}  // namespace

BloomResult run_bloom(const ExperimentConfig& config) {
  if (config.bloom_sets == 0 || config.bloom_items == 0) throw InvalidArgument("bloom needs sets and items");
  if (config.bloom_items + config.bloom_probes / config.bloom_sets + 1 > config.bloom_universe) {
    throw InvalidArgument("bloom_universe too small for the items and absent-key probes");
  }
  BloomResult r;
  r.sets = config.bloom_sets;
  r.items = config.bloom_items;
  r.hashes = config.bloom_hashes;
  r.buckets = config.bloom_buckets;
  const WitnessSpace space = WitnessSpace::boolean_space(config.bloom_universe);
  const std::uint64_t seed = config.seed ^ kBloomSalt;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, config.bloom_universe - 1);
  for (std::uint64_t s = 0; s < config.bloom_sets; ++s) {
    const HashFamily family(trial_seed(seed, s), config.bloom_hashes, config.bloom_universe, config.bloom_buckets);
    const Encoder encoder(space, family, MonoidSpec::boolean());
    const IdSet set{distinct_ids(config.bloom_items, config.bloom_universe, rng)};
    const Encoding filter = encoder.encode(set);

    // Textbook construction: set bit h_k(id) for every id and every k.
    std::vector<bool> bits(config.bloom_buckets, false);
    for (const std::uint64_t id : set.ids) {
      for (std::uint32_t k = 0; k < config.bloom_hashes; ++k) bits[family.eval(k, id)] = true;
    }
    const auto textbook_member = [&](std::uint64_t id) {
      for (std::uint32_t k = 0; k < config.bloom_hashes; ++k) {
        if (!bits[family.eval(k, id)]) return false;
      }
      return true;
    };
    for (std::uint64_t j = 0; j < config.bloom_buckets; ++j) {
      if (filter.columns()[0].bit(j) != bits[j]) ++r.bit_mismatches;
    }
    for (const std::uint64_t id : set.ids) {
      if (!singleton_member(encoder, filter, id)) ++r.false_negatives;
    }
    const std::uint64_t probes = config.bloom_probes / config.bloom_sets + (s < config.bloom_probes % config.bloom_sets);
    for (std::uint64_t p = 0; p < probes;) {
      const std::uint64_t id = pick(rng);
      if (std::binary_search(set.ids.begin(), set.ids.end(), id)) continue;
      const bool member = singleton_member(encoder, filter, id);
      if (member != textbook_member(id)) ++r.membership_mismatches;
      if (member) ++r.false_positives;
      ++p;
      ++r.probes;
    }
  }
  r.measured_rate = static_cast<double>(r.false_positives) / static_cast<double>(r.probes);
  const double load = static_cast<double>(config.bloom_hashes) * static_cast<double>(config.bloom_items) /
                      static_cast<double>(config.bloom_buckets);
  r.predicted_rate = std::pow(1.0 - std::exp(-load), static_cast<double>(config.bloom_hashes));
  r.passed = r.bit_mismatches == 0 && r.membership_mismatches == 0 && r.false_negatives == 0 &&
             std::abs(r.measured_rate - r.predicted_rate) <= 0.01;
  return r;
}

MinHashResult run_minhash(const ExperimentConfig& config) {
  if (config.minhash_union < 2 || config.minhash_buckets == 0 || config.minhash_trials == 0) {
    throw InvalidArgument("minhash needs a union of at least two ids, buckets and trials");
  }
  MinHashResult r;
  r.trials = config.minhash_trials;
  r.buckets = config.minhash_buckets;
  const std::uint64_t universe = 4 * config.minhash_union;
  const std::uint64_t seed = config.seed ^ kMinHashSalt;
  std::mt19937_64 rng(seed);
  const MonoidSpec spec = MonoidSpec::tropical(1.0);

  const auto estimate = [&](const IdSet& x, const IdSet& y, std::uint64_t t) {
    const WitnessSpace space = WitnessSpace::priority_space(universe, trial_seed(seed ^ kPrioritySalt, t));
    const Encoder encoder(space, HashFamily(trial_seed(seed, t), 1, universe, config.minhash_buckets), spec);
    return minhash_jaccard(encoder.encode(x), encoder.encode(y));
  };

  bool ok = true;
  for (const double target : config.minhash_jaccards) {
    if (!(target >= 0.0 && target <= 1.0)) throw InvalidArgument("minhash_jaccards must lie in [0, 1]");
    std::vector<std::uint64_t> ids(universe);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    const auto u = static_cast<std::ptrdiff_t>(config.minhash_union);
    const auto shared = static_cast<std::ptrdiff_t>(std::llround(target * static_cast<double>(u)));
    const std::ptrdiff_t only_x = (u - shared) / 2;
    std::vector<std::uint64_t> xs(ids.begin(), ids.begin() + shared + only_x);
    std::vector<std::uint64_t> ys(ids.begin(), ids.begin() + shared);
    ys.insert(ys.end(), ids.begin() + shared + only_x, ids.begin() + u);
    const IdSet x = IdSet::from_unsorted(xs);
    const IdSet y = IdSet::from_unsorted(ys);

    std::vector<std::uint64_t> inter;
    std::vector<std::uint64_t> uni;
    std::set_intersection(x.ids.begin(), x.ids.end(), y.ids.begin(), y.ids.end(), std::back_inserter(inter));
    std::set_union(x.ids.begin(), x.ids.end(), y.ids.begin(), y.ids.end(), std::back_inserter(uni));
    MinHashPoint point;
    point.exact_jaccard = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    double sum = 0.0;
    for (std::uint64_t t = 0; t < config.minhash_trials; ++t) sum += estimate(x, y, t);
    point.mean_estimate = sum / static_cast<double>(config.minhash_trials);
    point.bias = point.mean_estimate - point.exact_jaccard;
    ok = ok && std::abs(point.bias) <= 0.02;
    r.points.push_back(point);
  }
  const IdSet same = IdSet::from_unsorted(distinct_ids(config.minhash_union, universe, rng));
  double same_sum = 0.0;
  const std::uint64_t same_trials = std::min<std::uint64_t>(config.minhash_trials, 100);
  for (std::uint64_t t = 0; t < same_trials; ++t) same_sum += estimate(same, same, t);
  r.identical_estimate = same_sum / static_cast<double>(same_trials);
  r.passed = ok && r.identical_estimate == 1.0;
  return r;
}

CountMinResult run_countmin(const ExperimentConfig& config) {
  if (config.countmin_keys == 0 || config.countmin_clip == 0) throw InvalidArgument("countmin needs keys and a clip");
  CountMinResult r;
  r.keys = config.countmin_keys;
  r.hashes = config.countmin_hashes;
  r.buckets = config.countmin_buckets;
  const std::uint64_t seed = config.seed ^ kCountMinSalt;
  const CountMap counts = zipf_counts(config.countmin_keys, config.zipf_exponent, config.zipf_scale, seed);
  const HashFamily family(trial_seed(seed, 0), config.countmin_hashes, config.countmin_keys, config.countmin_buckets);

  const Encoder raw(WitnessSpace::count_space(config.countmin_keys), family, MonoidSpec::natural());
  const Encoding sketch = raw.encode(counts);
  const WitnessSpace clipped_space = WitnessSpace::count_space(config.countmin_keys, config.countmin_clip);
  const Encoder clipped(clipped_space, family, MonoidSpec::natural(config.countmin_clip));
  const Encoding clipped_sketch = clipped.encode(counts);

  std::vector<double> over;
  over.reserve(counts.entries.size());
  for (const auto& [id, count] : counts.entries) {
    const std::uint64_t estimate = count_min_estimate(sketch, raw, id);
    if (estimate < count) ++r.underestimates;
    over.push_back(static_cast<double>(estimate) - static_cast<double>(count));
    if (count_min_estimate(clipped_sketch, clipped, id) < std::min(count, config.countmin_clip)) {
      ++r.clipped_underestimates;
    }
  }
  std::sort(over.begin(), over.end());
  r.overestimate_p50 = quantile(over, 0.5);
  r.overestimate_p90 = quantile(over, 0.9);
  r.overestimate_p99 = quantile(over, 0.99);
  r.overestimate_max = over.empty() ? 0.0 : over.back();

  r.clip_bound = clipped_space.bound();
  for (const auto& w : clipped_space.active(counts)) {
    r.clip_max_magnitude = std::max(r.clip_max_magnitude, static_cast<double>(w.count));
  }
  const WitnessSpace log_space = WitnessSpace::log_count_space(config.countmin_keys, config.countmin_clip);
  r.log_bound = log_space.bound();
  for (const auto& w : log_space.active(counts)) r.log_max_magnitude = std::max(r.log_max_magnitude, std::abs(w.value));
  r.passed = r.underestimates == 0 && r.clipped_underestimates == 0 && r.clip_max_magnitude <= r.clip_bound &&
             r.log_max_magnitude <= r.log_bound;
  return r;
}

RffResult run_rff(const ExperimentConfig& config) {
  RffResult r;
  r.pairs = config.rff_pairs;
  r.dim = config.rff_dim;
  r.features = config.rff_features;
  r.buckets = config.rff_buckets;
  if (config.rff_pairs == 0) throw InvalidArgument("rff needs at least one pair");
  const std::uint64_t seed = config.seed ^ kRffSalt;
  const WitnessSpace space = WitnessSpace::fourier_space(config.rff_dim, config.rff_features, config.rff_bandwidth, seed);
  // One hash function: each feature lands in one bucket, so S estimates the kernel with unit slope.
  const Encoder encoder(space, HashFamily(trial_seed(seed, 0), 1, config.rff_features, config.rff_buckets),
                        MonoidSpec::real());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> spread(0.0, 0.8);
  double total = 0.0;
  for (std::uint64_t p = 0; p < config.rff_pairs; ++p) {
    const DenseVector x = gaussian_vector(config.rff_dim, 1.0, rng);
    const DenseVector noise = gaussian_vector(config.rff_dim, spread(rng), rng);
    DenseVector y = x;
    double dist2 = 0.0;
    for (std::size_t i = 0; i < y.values.size(); ++i) {
      y.values[i] += noise.values[i];
      dist2 += noise.values[i] * noise.values[i];
    }
    const double kernel = std::exp(-config.rff_bandwidth * config.rff_bandwidth * dist2 / 2.0);
    const double s = rewa_similarity(encoder.encode(x), encoder.encode(y), MonoidSpec::real());
    const double err = std::abs(s - kernel);
    r.max_abs_error = std::max(r.max_abs_error, err);
    total += err;
  }
  r.mean_abs_error = total / static_cast<double>(config.rff_pairs);
  r.passed = r.max_abs_error <= 0.05;
  return r;
}

EquivalenceReport run_equivalence(const ExperimentConfig& config) {
  config.validate();
  EquivalenceReport r;
  const bool all = config.method == "all";
  r.passed = true;
  if (all || config.method == "bloom") {
    r.bloom = run_bloom(config);
    r.passed = r.passed && r.bloom->passed;
  }
  if (all || config.method == "minhash") {
    r.minhash = run_minhash(config);
    r.passed = r.passed && r.minhash->passed;
  }
  if (all || config.method == "countmin") {
    r.countmin = run_countmin(config);
    r.passed = r.passed && r.countmin->passed;
  }
  if (all || config.method == "rff") {
    r.rff = run_rff(config);
    r.passed = r.passed && r.rff->passed;
  }
  return r;
}

namespace {

bool close_real(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

// Bit-exact except Real columns, which compare within 1e-9 per bucket.
bool encodings_match(const Encoding& a, const Encoding& b) {
  if (!(a.header() == b.header())) return false;
  for (std::size_t c = 0; c < a.columns().size(); ++c) {
    const Column& x = a.columns()[c];
    const Column& y = b.columns()[c];
    if (x.words != y.words || x.values.size() != y.values.size()) return false;
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      if (x.kind == MonoidKind::kReal ? !close_real(x.values[j], y.values[j])
                                      : std::bit_cast<std::uint64_t>(x.values[j]) !=
                                            std::bit_cast<std::uint64_t>(y.values[j])) {
        return false;
      }
    }
  }
  return true;
}

PermutationCheck permutation_check(std::string name, const Encoder& encoder, const DataItem& x,
                                   std::uint64_t permutations, std::mt19937_64& rng) {
  PermutationCheck out{std::move(name), permutations, 0};
  const Encoding reference = encoder.encode(x);
  std::vector<std::uint64_t> order(encoder.space().size());
  std::iota(order.begin(), order.end(), 0);
  for (std::uint64_t p = 0; p < permutations; ++p) {
    std::shuffle(order.begin(), order.end(), rng);
    if (!encodings_match(reference, encoder.encode_in_order(x, order))) ++out.differing;
  }
  return out;
}

DenseVector uniform_vector(std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseVector v;
  v.values.resize(dim);
  for (auto& x : v.values) x = u(rng);
  return v;
}

}  // namespace

std::vector<double> median_fold(const Encoder& encoder, const DataItem& x, const std::vector<std::uint64_t>& order) {
  if (encoder.space().carrier() != MonoidKind::kReal) throw TypeError("median fold needs a Real witness space");
  std::vector<double> buckets(encoder.header().buckets, std::numeric_limits<double>::quiet_NaN());
  for (const std::uint64_t i : order) {
    const double v = encoder.space().evaluate(i, x).real_value();
    for (const std::uint64_t j : encoder.buckets_of(i)) {
      buckets[j] = std::isnan(buckets[j]) ? v : (buckets[j] + v) / 2.0;
    }
  }
  return buckets;
}

FailureReport run_failure_modes(const ExperimentConfig& config) {
  config.validate();
  FailureReport r;
  const std::uint64_t seed = config.seed ^ kFailureSalt;
  std::mt19937_64 rng(seed);
  constexpr std::uint64_t kPermutations = 100;

  // Eight distinct values folded into two buckets: some bucket receives at least four.
  {
    const WitnessSpace space = WitnessSpace::embedding_space(8);
    const Encoder encoder(space, HashFamily(trial_seed(seed, 0), 1, 8, 2), MonoidSpec::real());
    const DataItem x = DenseVector{{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}};
    std::vector<std::uint64_t> order(8);
    std::iota(order.begin(), order.end(), 0);
    std::set<std::vector<std::uint64_t>> distinct;
    for (std::uint64_t p = 0; p < kPermutations; ++p) {
      std::shuffle(order.begin(), order.end(), rng);
      std::vector<std::uint64_t> bits;
      for (const double v : median_fold(encoder, x, order)) bits.push_back(std::bit_cast<std::uint64_t>(v));
      distinct.insert(std::move(bits));
    }
    r.median_permutations = kPermutations;
    r.median_distinct = distinct.size();
    r.median_order_dependent = distinct.size() >= 2;
  }

  // The same permutation test on the associative monoids, with small n to force collisions.
  {
    const WitnessSpace space = WitnessSpace::boolean_space(64);
    const Encoder encoder(space, HashFamily(trial_seed(seed, 1), 2, 64, 8), MonoidSpec::boolean());
    const DataItem x = IdSet{distinct_ids(20, 64, rng)};
    r.associative.push_back(permutation_check("boolean", encoder, x, kPermutations, rng));
  }
  {
    const WitnessSpace space = WitnessSpace::count_space(64);
    const Encoder encoder(space, HashFamily(trial_seed(seed, 2), 2, 64, 8), MonoidSpec::natural());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
    std::uniform_int_distribution<std::uint64_t> count(1, 1000);
    for (const std::uint64_t id : distinct_ids(20, 64, rng)) entries.emplace_back(id, count(rng));
    r.associative.push_back(permutation_check("natural", encoder, CountMap::from_unsorted(entries), kPermutations, rng));
  }
  {
    const WitnessSpace space = WitnessSpace::embedding_space(16);
    const Encoder encoder(space, HashFamily(trial_seed(seed, 3), 2, 16, 4), MonoidSpec::real());
    r.associative.push_back(permutation_check("real", encoder, uniform_vector(16, rng), kPermutations, rng));
  }
  {
    const Graph graph = random_graph(32, 64, 1.0, 10.0, seed);
    const WitnessSpace space = WitnessSpace::tropical_space(graph, sample_landmarks(32, 16, seed), 1000.0);
    const Encoder encoder(space, HashFamily(trial_seed(seed, 4), 2, 16, 4), MonoidSpec::tropical(1000.0));
    r.associative.push_back(permutation_check("tropical", encoder, VertexId{5}, kPermutations, rng));
  }
  {
    const WitnessSpace space =
        WitnessSpace::product_space(WitnessSpace::boolean_space(64), WitnessSpace::embedding_space(16));
    const MonoidSpec spec = product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), 0.5, 2.0);
    const Encoder encoder(space, HashFamily(trial_seed(seed, 5), 2, 80, 8), spec);
    const DataItem x = DataItem::pair(IdSet{distinct_ids(20, 64, rng)}, uniform_vector(16, rng));
    r.associative.push_back(permutation_check("product", encoder, x, kPermutations, rng));
  }

  r.sweep = run_gap_sweep(config);
  r.passed = r.median_order_dependent && r.sweep.monotone && r.sweep.exhausted;
  for (const auto& check : r.associative) r.passed = r.passed && check.differing == 0;
  return r;
}

namespace {

// Unit vector at exactly cosine c from unit vector v.
DenseVector at_cosine(const DenseVector& v, double c, std::mt19937_64& rng) {
  DenseVector w = gaussian_vector(v.values.size(), 1.0, rng);
  double dot = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) dot += w.values[i] * v.values[i];
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] -= dot * v.values[i];
  w = l2_normalize(w);
  const double s = std::sqrt(1.0 - c * c);
  DenseVector out;
  out.values.resize(v.values.size());
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = c * v.values[i] + s * w.values[i];
  return l2_normalize(out);
}

// min over queries of Delta(q, neighbor) - max over other items Delta(q, w).
double gap_under(const PlantedDataset& d, const WitnessSpace& space, const MonoidSpec& spec,
                 const std::vector<DataItem>& queries, const std::vector<DataItem>& corpus) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double own = ideal_overlap(space, spec, queries[q], corpus[d.neighbors[q]]);
    for (std::size_t w = 0; w < corpus.size(); ++w) {
      if (w != d.neighbors[q]) gap = std::min(gap, own - ideal_overlap(space, spec, queries[q], corpus[w]));
    }
  }
  return gap;
}

std::vector<DataItem> channel(const std::vector<DataItem>& items, bool second) {
  std::vector<DataItem> out;
  out.reserve(items.size());
  for (const auto& x : items) {
    const ItemPair* p = x.get_if<ItemPair>();
    if (p == nullptr) throw InvalidArgument("hybrid items must be channel pairs");
    out.push_back(second ? *p->second : *p->first);
  }
  return out;
}

}  // namespace

HybridDataset hybrid_dataset(const ExperimentConfig& config) {
  const std::uint64_t q_count = config.queries;
  const std::uint64_t base = config.base_size;
  const std::uint64_t pool_size = 4 * base;
  if (config.corpus_size <= q_count) throw InvalidArgument("hybrid corpus must exceed the query count");
  if (base < 8) throw InvalidArgument("hybrid base_size must be at least 8");
  if (config.dim < 2) throw InvalidArgument("hybrid dim must be at least 2");
  if (q_count * base + pool_size > config.universe) {
    throw InvalidArgument("universe too small for the hybrid query blocks and pool");
  }
  constexpr double kNeighborCosine = 0.6;
  constexpr double kSemanticDecoyCosine = 0.8;
  const std::uint64_t neighbor_share = 3 * base / 8;
  const std::uint64_t lexical_share = base / 2;

  std::mt19937_64 rng(config.seed ^ kHybridSalt);
  std::vector<std::uint64_t> perm(config.universe);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto block = [&](std::uint64_t q) {
    return std::vector<std::uint64_t>(perm.begin() + static_cast<std::ptrdiff_t>(q * base),
                                      perm.begin() + static_cast<std::ptrdiff_t>((q + 1) * base));
  };
  const std::vector<std::uint64_t> pool(perm.begin() + static_cast<std::ptrdiff_t>(q_count * base),
                                        perm.begin() + static_cast<std::ptrdiff_t>(q_count * base + pool_size));
  // `share` ids of query q's block topped up to base_size from the pool.
  const auto ids_sharing = [&](std::optional<std::uint64_t> q, std::uint64_t share) {
    std::vector<std::uint64_t> ids;
    if (q) {
      auto b = block(*q);
      std::shuffle(b.begin(), b.end(), rng);
      ids.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(share));
    }
    std::vector<std::uint64_t> fill = pool;
    std::shuffle(fill.begin(), fill.end(), rng);
    ids.insert(ids.end(), fill.begin(), fill.begin() + static_cast<std::ptrdiff_t>(base - ids.size()));
    return IdSet::from_unsorted(std::move(ids));
  };

  HybridDataset out{PlantedDataset{}, WitnessSpace::product_space(WitnessSpace::boolean_space(config.universe),
                                                                  WitnessSpace::embedding_space(config.dim))};
  PlantedDataset& d = out.data;
  d.seed = config.seed;
  std::vector<DenseVector> directions;
  for (std::uint64_t q = 0; q < q_count; ++q) {
    directions.push_back(l2_normalize(gaussian_vector(config.dim, 1.0, rng)));
    d.queries.push_back(DataItem::pair(IdSet::from_unsorted(block(q)), directions.back()));
  }
  std::vector<DataItem> items;
  for (std::uint64_t j = 0; j < config.corpus_size; ++j) {
    if (j < q_count) {
      items.push_back(DataItem::pair(ids_sharing(j, neighbor_share), at_cosine(directions[j], kNeighborCosine, rng)));
      continue;
    }
    const std::uint64_t target = (j - q_count) % q_count;
    switch ((j - q_count) / q_count % 3) {
      case 0:  // lexical decoy: strong keyword overlap, orthogonal direction
        items.push_back(DataItem::pair(ids_sharing(target, lexical_share), at_cosine(directions[target], 0.0, rng)));
        break;
      case 1:  // semantic decoy: no shared keywords, closer direction
        items.push_back(DataItem::pair(ids_sharing(std::nullopt, 0),
                                       at_cosine(directions[target], kSemanticDecoyCosine, rng)));
        break;
      default:
        items.push_back(DataItem::pair(ids_sharing(std::nullopt, 0),
                                       l2_normalize(gaussian_vector(config.dim, 1.0, rng))));
        break;
    }
  }
  std::vector<std::uint64_t> slot(config.corpus_size);
  std::iota(slot.begin(), slot.end(), 0);
  std::shuffle(slot.begin(), slot.end(), rng);
  d.corpus.assign(items.size(), items.front());
  for (std::uint64_t j = 0; j < items.size(); ++j) d.corpus[slot[j]] = items[j];
  for (std::uint64_t q = 0; q < q_count; ++q) d.neighbors.push_back(slot[q]);

  const MonoidSpec spec =
      product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), config.lambda1, config.lambda2);
  d.verified_gap = gap_under(d, out.space, spec, d.queries, d.corpus);
  d.gap = d.verified_gap;
  out.channel1_gap =
      gap_under(d, out.space.first(), MonoidSpec::boolean(), channel(d.queries, false), channel(d.corpus, false));
  out.channel2_gap =
      gap_under(d, out.space.second(), MonoidSpec::real(), channel(d.queries, true), channel(d.corpus, true));
  return out;
}

HybridReport run_hybrid(const ExperimentConfig& config) {
  config.validate();
  const HybridDataset hd = hybrid_dataset(config);
  const PlantedDataset& d = hd.data;
  const MonoidSpec spec1 = MonoidSpec::boolean();
  const MonoidSpec spec2 = MonoidSpec::real();
  const MonoidSpec spec = product_monoid(spec1, spec2, config.lambda1, config.lambda2);
  const MonoidSpec collapse_spec = product_monoid(spec1, spec2, 1.0, 0.0);
  const std::uint64_t m1 = hd.space.first().size();
  const std::uint64_t m2 = hd.space.second().size();
  const auto corpus1 = channel(d.corpus, false);
  const auto corpus2 = channel(d.corpus, true);
  const auto queries1 = channel(d.queries, false);
  const auto queries2 = channel(d.queries, true);

  HybridReport r;
  r.lambda1 = config.lambda1;
  r.lambda2 = config.lambda2;
  r.corpus_size = d.corpus.size();
  r.buckets = config.hybrid_buckets;
  r.trials = config.trials;
  r.combined_gap = d.verified_gap;
  r.channel1_gap = hd.channel1_gap;
  r.channel2_gap = hd.channel2_gap;
  r.decomposition_pairs = config.hybrid_pairs;
  r.collapse_identical = true;

  std::uint64_t hits = 0;
  std::uint64_t hits1 = 0;
  std::uint64_t hits2 = 0;
  std::uint64_t attempts = 0;
  std::vector<double> s;
  std::vector<double> s1;
  std::vector<double> s2;
  std::mt19937_64 rng(config.seed ^ kHybridSalt);
  for (std::uint64_t t = 0; t < config.trials; ++t) {
    const HashFamily family(trial_seed(config.seed ^ kHybridSalt, t), config.hashes, m1 + m2, config.hybrid_buckets);
    const Encoder joint(hd.space, family, spec);
    const Encoder first(hd.space.first(), family.slice(0, m1), spec1);
    const Encoder second(hd.space.second(), family.slice(m1, m2), spec2);
    const auto e = encode_all(joint, d.corpus);
    const auto e1 = encode_all(first, corpus1);
    const auto e2 = encode_all(second, corpus2);
    for (std::size_t q = 0; q < d.queries.size(); ++q) {
      score_against(joint.encode(d.queries[q]), e, spec, s);
      score_against(first.encode(queries1[q]), e1, spec1, s1);
      score_against(second.encode(queries2[q]), e2, spec2, s2);
      hits += topk_scores(s, config.k).rank_of(d.neighbors[q]) < config.k;
      hits1 += topk_scores(s1, config.k).rank_of(d.neighbors[q]) < config.k;
      hits2 += topk_scores(s2, config.k).rank_of(d.neighbors[q]) < config.k;
      ++attempts;
    }
    if (t != 0) continue;

    std::uniform_int_distribution<std::size_t> pick(0, d.corpus.size() - 1);
    for (std::uint64_t p = 0; p < config.hybrid_pairs; ++p) {
      const std::size_t a = pick(rng);
      const std::size_t b = pick(rng);
      const double joint_score = rewa_similarity(e[a], e[b], spec);
      const double split_score =
          config.lambda1 * rewa_similarity(e1[a], e1[b], spec1) + config.lambda2 * rewa_similarity(e2[a], e2[b], spec2);
      const double scale = std::max({std::abs(joint_score), std::abs(split_score), 1e-300});
      r.max_relative_deviation = std::max(r.max_relative_deviation, std::abs(joint_score - split_score) / scale);
    }

    const Encoder collapsed(hd.space, family, collapse_spec);
    const auto ec = encode_all(collapsed, d.corpus);
    for (std::size_t q = 0; q < d.queries.size(); ++q) {
      score_against(collapsed.encode(d.queries[q]), ec, collapse_spec, s);
      score_against(first.encode(queries1[q]), e1, spec1, s1);
      const RankedList a = topk_scores(s, s.size());
      const RankedList b = topk_scores(s1, s1.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.items[i].id != b.items[i].id) r.collapse_identical = false;
      }
    }
  }
  const auto rate = [&](std::uint64_t h) { return static_cast<double>(h) / static_cast<double>(attempts); };
  r.combined_success = rate(hits);
  r.channel1_success = rate(hits1);
  r.channel2_success = rate(hits2);
  r.passed = r.max_relative_deviation <= 1e-9 && r.collapse_identical &&
             r.combined_success > std::max(r.channel1_success, r.channel2_success);
  return r;
}

namespace {

MonoidElement random_element(const MonoidSpec& spec, std::mt19937_64& rng) {
  switch (spec.kind()) {
    case MonoidKind::kBoolean:
      return MonoidElement::boolean((rng() & 1U) != 0);
    case MonoidKind::kNatural:
      switch (rng() % 4) {
        case 0:
          return MonoidElement::natural(0);
        case 1:
          return MonoidElement::natural(rng() % 1000);
        case 2:
          return MonoidElement::natural(rng());
        default:
          return MonoidElement::natural(kNaturalSaturation - rng() % 1000);
      }
    case MonoidKind::kReal: {
      if (rng() % 8 == 0) return MonoidElement::real(0.0);
      std::uniform_real_distribution<double> u(-1e3, 1e3);
      return MonoidElement::real(u(rng));
    }
    case MonoidKind::kTropical: {
      const auto r = rng() % 8;
      if (r == 0) return MonoidElement::tropical(kTropicalInfinity);
      if (r == 1) return MonoidElement::tropical(0.0);
      std::uniform_real_distribution<double> u(0.0, 2.0 * spec.diameter());
      return MonoidElement::tropical(u(rng));
    }
    case MonoidKind::kProduct:
      break;
  }
  MonoidElement first = random_element(spec.first(), rng);
  return MonoidElement::pair(std::move(first), random_element(spec.second(), rng));
}

bool same_element(const MonoidSpec& spec, const MonoidElement& a, const MonoidElement& b) {
  if (spec.kind() == MonoidKind::kReal) return close_real(a.real_value(), b.real_value());
  if (spec.kind() == MonoidKind::kProduct) {
    return same_element(spec.first(), a.first(), b.first()) && same_element(spec.second(), a.second(), b.second());
  }
  return a == b;
}

Encoding sample_encoding(MonoidKind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (kind) {
    case MonoidKind::kBoolean:
      return encode(WitnessSpace::boolean_space(100), HashFamily(seed, 3, 100, 61), MonoidSpec::boolean(),
                    IdSet{distinct_ids(12, 100, rng)});
    case MonoidKind::kNatural:
      return encode(WitnessSpace::count_space(100), HashFamily(seed, 3, 100, 37), MonoidSpec::natural(),
                    CountMap::from_unsorted({{3, 7}, {40, 1}, {99, 123456789}}));
    case MonoidKind::kReal:
      return encode(WitnessSpace::embedding_space(16), HashFamily(seed, 2, 16, 23), MonoidSpec::real(),
                    uniform_vector(16, rng));
    case MonoidKind::kTropical: {
      // Vertex 5 has no edges, so every bucket it reaches holds +inf.
      Graph graph(6);
      graph.add_edge(0, 1, 1.5);
      graph.add_edge(1, 2, 2.0);
      graph.add_edge(3, 4, 0.25);
      const WitnessSpace space = WitnessSpace::tropical_space(graph, {0, 2, 3, 5}, 10.0);
      return encode(space, HashFamily(seed, 2, 4, 9), MonoidSpec::tropical(10.0), VertexId{1});
    }
    case MonoidKind::kProduct:
      break;
  }
  const WitnessSpace space =
      WitnessSpace::product_space(WitnessSpace::boolean_space(40), WitnessSpace::embedding_space(8));
  return encode(space, HashFamily(seed, 2, 48, 29),
                product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), 0.25, 1.0),
                DataItem::pair(IdSet{{1, 7, 30}}, uniform_vector(8, rng)));
}

}  // namespace

LawCheck check_monoid_laws(const MonoidSpec& spec, std::uint64_t triples, std::uint64_t seed) {
  LawCheck out;
  out.monoid = std::string(to_string(spec.kind()));
  out.triples = triples;
  std::mt19937_64 rng(seed);
  const MonoidElement e = spec.identity();
  for (std::uint64_t t = 0; t < triples; ++t) {
    const MonoidElement a = random_element(spec, rng);
    const MonoidElement b = random_element(spec, rng);
    const MonoidElement c = random_element(spec, rng);
    const MonoidElement lhs = spec.combine(spec.combine(a, b), c);
    const MonoidElement rhs = spec.combine(a, spec.combine(b, c));
    if (!same_element(spec, lhs, rhs)) ++out.associativity_failures;
    if (!same_element(spec, spec.combine(a, b), spec.combine(b, a))) ++out.commutativity_failures;
    if (!same_element(spec, spec.combine(a, e), a) || !same_element(spec, spec.combine(e, a), a)) {
      ++out.identity_failures;
    }
  }
  return out;
}

SelftestReport run_selftest(const ExperimentConfig& config) {
  SelftestReport r;
  const std::uint64_t seed = config.seed ^ kSelftestSalt;
  const std::vector<MonoidSpec> specs = {
      MonoidSpec::boolean(), MonoidSpec::natural(), MonoidSpec::real(), MonoidSpec::tropical(100.0),
      product_monoid(MonoidSpec::boolean(), MonoidSpec::real(), 0.5, 2.0)};
  bool ok = true;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    r.laws.push_back(check_monoid_laws(specs[i], 10000, trial_seed(seed, i)));
    const auto& l = r.laws.back();
    ok = ok && l.associativity_failures == 0 && l.commutativity_failures == 0 && l.identity_failures == 0;
  }

  constexpr std::array<std::uint64_t, 4> kInputs = {0, 1, 2, 3};
  constexpr std::uint64_t kTrials = 1000000;
  r.fourwise = fourwise_moment_test([](std::uint64_t s) { return HashFamily(s, 1, 1024, 4); }, kInputs, kTrials, seed);
  r.pairwise = fourwise_moment_test(
      [](std::uint64_t s) { return HashFamily(s, 1, 1024, 4, Independence::kPairwise); }, kInputs, kTrials, seed);
  ok = ok && r.fourwise.passed && !r.pairwise.passed;

  for (const MonoidKind kind : {MonoidKind::kBoolean, MonoidKind::kNatural, MonoidKind::kReal,
                                MonoidKind::kTropical, MonoidKind::kProduct}) {
    const Encoding enc = sample_encoding(kind, seed);
    if (deserialize(serialize(enc)) == enc) {
      r.round_trips.emplace_back(to_string(kind));
    } else {
      ok = false;
    }
  }
  auto bytes = serialize(sample_encoding(MonoidKind::kTropical, seed));
  bytes.pop_back();
  try {
    (void)deserialize(bytes);
  } catch (const FormatError& e) {
    r.truncation_rejected = e.offset() <= bytes.size();
  }
  r.passed = ok && r.round_trips.size() == 5 && r.truncation_rejected;
  return r;
}

}  // namespace rewa::harness
