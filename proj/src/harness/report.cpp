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

#include "rewa/harness/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace rewa::harness {

using nlohmann::json;

namespace {

json optional_u64(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

// Non-finite values have no JSON number form.
json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

json grid_json(const std::vector<GridPoint>& grid) {
  json out = json::array();
  for (const auto& p : grid) {
    out.push_back({{"N", p.corpus_size},
                   {"n", p.buckets},
                   {"successes", p.successes},
                   {"attempts", p.attempts},
                   {"success_rate", number(p.success_rate)},
                   {"noise_variance", number(p.noise_variance)},
                   {"mean_neighbor_score", number(p.mean_neighbor_score)}});
  }
  return out;
}

json fourwise_json(const FourwiseReport& r) {
  return {{"trials", r.trials},
          {"buckets", r.buckets},
          {"cells", r.cells},
          {"expected_per_cell", number(r.expected_per_cell)},
          {"standard_error", number(r.standard_error)},
          {"max_abs_deviation", number(r.max_abs_deviation)},
          {"max_z", number(r.max_z)},
          {"cells_over_threshold", r.cells_over_threshold},
          {"threshold_z", number(r.threshold_z)},
          {"passed", r.passed}};
}

void csv_row(std::ostringstream& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << f;
    first = false;
  }
  out << '\n';
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

json config_json(const ExperimentConfig& c) {
  return {{"instantiation", c.instantiation},
          {"method", c.method},
          {"corpus_size", c.corpus_size},
          {"corpus_sizes", c.corpus_sizes},
          {"universe", c.universe},
          {"base_size", c.base_size},
          {"overlap_hi", c.overlap_hi},
          {"overlap_lo", c.overlap_lo},
          {"share_min", c.share_min},
          {"queries", c.queries},
          {"pool_size", c.pool_size},
          {"dim", c.dim},
          {"gap_cosine", c.gap_cosine},
          {"neighbor_cosine", c.neighbor_cosine},
          {"clip", c.clip},
          {"gap_levels", c.gap_levels},
          {"sweep_grid", c.gap_sweep_grid()},
          {"n_grid", c.ranking_grid()},
          {"hashes", c.hashes},
          {"trials", c.trials},
          {"k", c.k},
          {"delta", c.delta},
          {"seed", c.seed},
          {"calibration_pairs", c.calibration_pairs},
          {"bloom_universe", c.bloom_universe},
          {"bloom_items", c.bloom_items},
          {"bloom_hashes", c.bloom_hashes},
          {"bloom_buckets", c.bloom_buckets},
          {"bloom_probes", c.bloom_probes},
          {"bloom_sets", c.bloom_sets},
          {"minhash_trials", c.minhash_trials},
          {"minhash_buckets", c.minhash_buckets},
          {"minhash_union", c.minhash_union},
          {"minhash_jaccards", c.minhash_jaccards},
          {"countmin_keys", c.countmin_keys},
          {"countmin_hashes", c.countmin_hashes},
          {"countmin_buckets", c.countmin_buckets},
          {"countmin_clip", c.countmin_clip},
          {"zipf_exponent", c.zipf_exponent},
          {"zipf_scale", c.zipf_scale},
          {"rff_dim", c.rff_dim},
          {"rff_features", c.rff_features},
          {"rff_pairs", c.rff_pairs},
          {"rff_buckets", c.rff_buckets},
          {"rff_bandwidth", c.rff_bandwidth},
          {"lambda1", c.lambda1},
          {"lambda2", c.lambda2},
          {"hybrid_buckets", c.hybrid_buckets},
          {"hybrid_pairs", c.hybrid_pairs},
          {"output", c.output}};
}

json envelope(const std::string& experiment, const ExperimentConfig& config, json body) {
  return {{"schema", kReportSchema}, {"experiment", experiment}, {"config", config_json(config)},
          {"result", std::move(body)}};
}

json to_json(const RankingReport& r) {
  json corpora = json::array();
  for (const auto& c : r.corpora) {
    json calibration = nullptr;
    if (c.calibration) {
      calibration = {{"alpha", number(c.calibration->alpha)},
                     {"beta", number(c.calibration->beta)},
                     {"r_squared", number(c.calibration->r_squared)},
                     {"seeds_used", c.calibration->seeds_used},
                     {"pairs_used", c.calibration->pairs_used}};
    }
    corpora.push_back({{"N", c.corpus_size},
                       {"gap", number(c.gap)},
                       {"minimal_n", optional_u64(c.minimal_n)},
                       {"reached", c.minimal_n.has_value()},
                       {"noise_variance", number(c.noise_variance)},
                       {"calibration", calibration},
                       {"reference_bound", c.reference_bound ? number(*c.reference_bound) : json(nullptr)},
                       {"notes", c.notes}});
  }
  json fit = nullptr;
  if (r.log_fit) {
    fit = {{"slope", number(r.log_fit->slope)},
           {"intercept", number(r.log_fit->intercept)},
           {"r_squared", number(r.log_fit->r_squared)}};
  }
  return {{"experiment", r.experiment},
          {"instantiation", r.instantiation},
          {"reference_constant", number(r.reference_constant)},
          {"witness_bound", number(r.witness_bound)},
          {"hashes", r.hashes},
          {"k", r.k},
          {"delta", number(r.delta)},
          {"trials", r.trials},
          {"queries", r.queries},
          {"seed", r.seed},
          {"grid", grid_json(r.grid)},
          {"corpora", corpora},
          {"log_fit", fit},
          {"flags", r.flags}};
}

json to_json(const GapSweepReport& r) {
  json levels = json::array();
  for (const auto& l : r.levels) {
    levels.push_back({{"gap", l.gap},
                      {"verified_gap", number(l.verified_gap)},
                      {"minimal_n", optional_u64(l.minimal_n)},
                      {"reached", l.minimal_n.has_value()},
                      {"grid", grid_json(l.grid)}});
  }
  return {{"N", r.corpus_size}, {"levels", levels}, {"monotone", r.monotone}, {"grid_exhausted", r.exhausted}};
}

json to_json(const EquivalenceReport& r) {
  json out = {{"passed", r.passed}};
  if (r.bloom) {
    const auto& b = *r.bloom;
    out["bloom"] = {{"sets", b.sets},
                    {"items", b.items},
                    {"hashes", b.hashes},
                    {"buckets", b.buckets},
                    {"bit_mismatches", b.bit_mismatches},
                    {"membership_mismatches", b.membership_mismatches},
                    {"false_negatives", b.false_negatives},
                    {"probes", b.probes},
                    {"false_positives", b.false_positives},
                    {"measured_rate", number(b.measured_rate)},
                    {"predicted_rate", number(b.predicted_rate)},
                    {"passed", b.passed}};
  }
  if (r.minhash) {
    json points = json::array();
    for (const auto& p : r.minhash->points) {
      points.push_back({{"exact_jaccard", number(p.exact_jaccard)},
                        {"mean_estimate", number(p.mean_estimate)},
                        {"bias", number(p.bias)}});
    }
    out["minhash"] = {{"trials", r.minhash->trials},
                      {"buckets", r.minhash->buckets},
                      {"points", points},
                      {"identical_estimate", number(r.minhash->identical_estimate)},
                      {"passed", r.minhash->passed}};
  }
  if (r.countmin) {
    const auto& c = *r.countmin;
    out["countmin"] = {{"keys", c.keys},
                       {"hashes", c.hashes},
                       {"buckets", c.buckets},
                       {"underestimates", c.underestimates},
                       {"clipped_underestimates", c.clipped_underestimates},
                       {"overestimate_p50", number(c.overestimate_p50)},
                       {"overestimate_p90", number(c.overestimate_p90)},
                       {"overestimate_p99", number(c.overestimate_p99)},
                       {"overestimate_max", number(c.overestimate_max)},
                       {"clip_bound", number(c.clip_bound)},
                       {"clip_max_magnitude", number(c.clip_max_magnitude)},
                       {"log_bound", number(c.log_bound)},
                       {"log_max_magnitude", number(c.log_max_magnitude)},
                       {"passed", c.passed}};
  }
  if (r.rff) {
    const auto& f = *r.rff;
    out["rff"] = {{"pairs", f.pairs},
                  {"dim", f.dim},
                  {"features", f.features},
                  {"buckets", f.buckets},
                  {"max_abs_error", number(f.max_abs_error)},
                  {"mean_abs_error", number(f.mean_abs_error)},
                  {"passed", f.passed}};
  }
  return out;
}

json to_json(const FailureReport& r) {
  json assoc = json::array();
  for (const auto& a : r.associative) {
    assoc.push_back({{"monoid", a.monoid}, {"permutations", a.permutations}, {"differing", a.differing}});
  }
  return {{"median", {{"permutations", r.median_permutations},
                      {"distinct_encodings", r.median_distinct},
                      {"order_dependent", r.median_order_dependent}}},
          {"associative", assoc},
          {"gap_sweep", to_json(r.sweep)},
          {"passed", r.passed}};
}

json to_json(const HybridReport& r) {
  return {{"lambda1", number(r.lambda1)},
          {"lambda2", number(r.lambda2)},
          {"N", r.corpus_size},
          {"n", r.buckets},
          {"trials", r.trials},
          {"combined_gap", number(r.combined_gap)},
          {"channel1_gap", number(r.channel1_gap)},
          {"channel2_gap", number(r.channel2_gap)},
          {"combined_success", number(r.combined_success)},
          {"channel1_success", number(r.channel1_success)},
          {"channel2_success", number(r.channel2_success)},
          {"decomposition_pairs", r.decomposition_pairs},
          {"max_relative_deviation", number(r.max_relative_deviation)},
          {"collapse_identical", r.collapse_identical},
          {"passed", r.passed}};
}

json to_json(const SelftestReport& r) {
  json laws = json::array();
  for (const auto& l : r.laws) {
    laws.push_back({{"monoid", l.monoid},
                    {"triples", l.triples},
                    {"associativity_failures", l.associativity_failures},
                    {"commutativity_failures", l.commutativity_failures},
                    {"identity_failures", l.identity_failures}});
  }
  return {{"laws", laws},
          {"fourwise", fourwise_json(r.fourwise)},
          {"pairwise_detected", !r.pairwise.passed},
          {"pairwise", fourwise_json(r.pairwise)},
          {"round_trips", r.round_trips},
          {"truncation_rejected", r.truncation_rejected},
          {"passed", r.passed}};
}

std::string to_csv(const RankingReport& r) {
  std::ostringstream out;
  csv_row(out, {"N", "n", "success_rate"});
  for (const auto& p : r.grid) {
    csv_row(out, {std::to_string(p.corpus_size), std::to_string(p.buckets), format_number(p.success_rate)});
  }
  return out.str();
}

std::string to_csv(const FailureReport& r) {
  std::ostringstream out;
  csv_row(out, {"gap", "N", "n", "success_rate"});
  for (const auto& l : r.sweep.levels) {
    for (const auto& p : l.grid) {
      csv_row(out, {std::to_string(l.gap), std::to_string(p.corpus_size), std::to_string(p.buckets),
                    format_number(p.success_rate)});
    }
  }
  return out.str();
}

std::string to_csv(const HybridReport& r) {
  std::ostringstream out;
  csv_row(out, {"channel", "N", "n", "success_rate"});
  const std::string n_col = std::to_string(r.buckets);
  const std::string big_n = std::to_string(r.corpus_size);
  csv_row(out, {"combined", big_n, n_col, format_number(r.combined_success)});
  csv_row(out, {"channel1", big_n, n_col, format_number(r.channel1_success)});
  csv_row(out, {"channel2", big_n, n_col, format_number(r.channel2_success)});
  return out.str();
}

std::string to_csv(const EquivalenceReport& r) {
  std::ostringstream out;
  csv_row(out, {"method", "metric", "value"});
  const json j = to_json(r);
  for (const char* method : {"bloom", "minhash", "countmin", "rff"}) {
    if (!j.contains(method)) continue;
    for (const auto& [key, value] : j[method].items()) {
      if (value.is_number() || value.is_boolean()) csv_row(out, {method, key, value.dump()});
    }
    if (std::string(method) == "minhash") {
      for (const auto& p : j[method]["points"]) {
        csv_row(out, {method, "bias@" + p["exact_jaccard"].dump(), p["bias"].dump()});
      }
    }
  }
  return out.str();
}

std::string to_csv(const SelftestReport& r) {
  std::ostringstream out;
  csv_row(out, {"check", "passed"});
  for (const auto& l : r.laws) {
    const bool ok = l.associativity_failures == 0 && l.commutativity_failures == 0 && l.identity_failures == 0;
    csv_row(out, {"laws:" + l.monoid, ok ? "1" : "0"});
  }
  csv_row(out, {"fourwise", r.fourwise.passed ? "1" : "0"});
  csv_row(out, {"pairwise_detected", r.pairwise.passed ? "0" : "1"});
  csv_row(out, {"round_trips", r.round_trips.size() == 5 ? "1" : "0"});
  csv_row(out, {"truncation_rejected", r.truncation_rejected ? "1" : "0"});
  return out.str();
}

}  // namespace rewa::harness
