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

// Witness spaces: the m functions f_i mapping a data item into a monoid carrier.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "rewa/graph.hpp"
#include "rewa/monoid.hpp"

namespace rewa {

// Strictly increasing ids.
struct IdSet {
  std::vector<std::uint64_t> ids;

  // Sorts and deduplicates.
  [[nodiscard]] static IdSet from_unsorted(std::vector<std::uint64_t> ids);
};

// (id, count) entries, ids strictly increasing, counts >= 1.
struct CountMap {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;

  // Merges duplicate ids by adding counts and drops zero counts.
  [[nodiscard]] static CountMap from_unsorted(std::vector<std::pair<std::uint64_t, std::uint64_t>> entries);
};

struct DenseVector {
  std::vector<double> values;
};

struct VertexId {
  std::uint64_t vertex;
};

class DataItem;

// An item seen through two channels, consumed by product witness spaces.
struct ItemPair {
  std::shared_ptr<const DataItem> first;
  std::shared_ptr<const DataItem> second;
};

class DataItem {
 public:
  using Value = std::variant<IdSet, CountMap, DenseVector, VertexId, ItemPair>;

  DataItem(IdSet v) : value_(std::move(v)) {}        // NOLINT(google-explicit-constructor)
  DataItem(CountMap v) : value_(std::move(v)) {}     // NOLINT(google-explicit-constructor)
  DataItem(DenseVector v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  DataItem(VertexId v) : value_(v) {}                // NOLINT(google-explicit-constructor)

  [[nodiscard]] static DataItem pair(DataItem first, DataItem second);

  [[nodiscard]] const Value& value() const noexcept { return value_; }
  template <class T>
  [[nodiscard]] const T* get_if() const noexcept {
    return std::get_if<T>(&value_);
  }

  // Checks the representation invariants above; throws InvalidArgument.
  void validate() const;

 private:
  explicit DataItem(ItemPair p) : value_(std::move(p)) {}
  Value value_;
};

// Returns x / ||x||. Throws InvalidArgument for a zero or non-finite vector.
[[nodiscard]] DenseVector l2_normalize(const DenseVector& x);

enum class WitnessTransform : std::uint8_t { kNone, kClip, kLogCompress };

// One non-neutral witness value. `count` carries Boolean / Natural payloads and
// `value` carries Real / Tropical payloads.
struct ActiveWitness {
  std::uint64_t index;
  std::uint64_t count;
  double value;
};

class WitnessSpace {
 public:
  // f_i(x) = [i in x], Boolean, L = 1.
  [[nodiscard]] static WitnessSpace boolean_space(std::uint64_t universe);
  // f_i(x) = min(count(i, x), clip), Natural, L = clip.
  [[nodiscard]] static WitnessSpace count_space(std::uint64_t vocabulary, std::uint64_t clip = kNaturalSaturation);
  // f_i(x) = ln(1 + min(count(i, x), clip)), Real, L = ln(1 + clip).
  [[nodiscard]] static WitnessSpace log_count_space(std::uint64_t vocabulary, std::uint64_t clip = kNaturalSaturation);
  // f_i(x) = sqrt(2/m) cos(w_i . x + b_i), w_i ~ N(0, bandwidth^2 I), b_i ~ U[0, 2 pi).
  [[nodiscard]] static WitnessSpace fourier_space(std::size_t dim, std::uint64_t features, double bandwidth,
                                                  std::uint64_t seed);
  // Same map with explicit frequencies (features x dim, row-major) and offsets.
  [[nodiscard]] static WitnessSpace fourier_space(std::size_t dim, std::vector<double> frequencies,
                                                  std::vector<double> offsets);
  // f_i(x) = x_i for |x_i| <= bound, Real, L = bound.
  [[nodiscard]] static WitnessSpace embedding_space(std::size_t dim, double bound = 1.0);
  // f_i(x) = priority_i if i in x else +inf, priorities ~ U[0, 1) from seed.
  // Tropical with D = 1; the bucket minima of this space are min-hash values.
  [[nodiscard]] static WitnessSpace priority_space(std::uint64_t universe, std::uint64_t seed);
  // f_i(x) = dist_G(x, landmark_i), reachable distances clamped to `diameter`,
  // unreachable vertices +inf. One shortest-path pass per landmark at construction.
  [[nodiscard]] static WitnessSpace tropical_space(const Graph& graph, std::vector<std::uint64_t> landmarks,
                                                   double diameter);
  // Disjoint union of two channels: witnesses [0, m1) emit (f1_i, e2), witnesses
  // [m1, m1 + m2) emit (e1, f2_{i - m1}).
  [[nodiscard]] static WitnessSpace product_space(const WitnessSpace& first, const WitnessSpace& second);

  [[nodiscard]] std::uint64_t size() const noexcept { return m_; }
  [[nodiscard]] MonoidKind carrier() const noexcept { return carrier_; }
  [[nodiscard]] double bound() const noexcept { return bound_; }
  [[nodiscard]] WitnessTransform transform() const noexcept { return transform_; }
  [[nodiscard]] std::uint64_t fingerprint() const noexcept { return fingerprint_; }
  [[nodiscard]] bool is_product() const noexcept { return carrier_ == MonoidKind::kProduct; }
  [[nodiscard]] const WitnessSpace& first() const;
  [[nodiscard]] const WitnessSpace& second() const;

  // True when this space's carrier tree matches `spec` (and the Tropical
  // diameter bound, when both carry one).
  [[nodiscard]] bool emits_into(const MonoidSpec& spec) const noexcept;

  // Throws InvalidArgument for i >= m or an item this space cannot read.
  [[nodiscard]] MonoidElement evaluate(std::uint64_t i, const DataItem& x) const;

  // Non-neutral witnesses of x in ascending index order. Sparse sources (sets,
  // counts) omit witnesses at the neutral value 0; dense and Tropical sources
  // report all m. Not defined for product spaces; use first() / second().
  [[nodiscard]] std::vector<ActiveWitness> active(const DataItem& x) const;

  // Witness value of `w` as a monoid element of this space's leaf carrier.
  [[nodiscard]] MonoidElement element_of(const ActiveWitness& w) const;

 private:
  struct SetIndicator {
    std::uint64_t universe;
  };
  struct Count {
    std::uint64_t vocabulary;
    std::uint64_t clip;
  };
  struct Fourier {
    std::size_t dim;
    std::vector<double> frequencies;
    std::vector<double> offsets;
    double scale;
  };
  struct Embedding {
    std::size_t dim;
  };
  struct Priority {
    std::vector<double> priorities;
  };
  struct Landmark {
    std::uint64_t vertex_count;
    std::vector<std::uint64_t> landmarks;
    double diameter;
    std::vector<double> distances;  // landmark-major: distances[l * V + v]
  };
  struct Product {
    std::shared_ptr<const WitnessSpace> first;
    std::shared_ptr<const WitnessSpace> second;
  };
  using Source = std::variant<SetIndicator, Count, Fourier, Embedding, Priority, Landmark, Product>;

  WitnessSpace(Source source, std::uint64_t m, MonoidKind carrier, double bound, WitnessTransform transform,
               std::uint64_t fingerprint)
      : source_(std::move(source)), m_(m), carrier_(carrier), bound_(bound), transform_(transform),
        fingerprint_(fingerprint) {}

  Source source_;
  std::uint64_t m_;
  MonoidKind carrier_;
  double bound_;
  WitnessTransform transform_;
  std::uint64_t fingerprint_;
};

// Delta(x, y) = sum_i phi(f_i(x), f_i(y)), the uncompressed similarity.
// Throws TypeError when `spec` does not match the space's carrier.
[[nodiscard]] double ideal_overlap(const WitnessSpace& space, const MonoidSpec& spec, const DataItem& x,
                                   const DataItem& y);

}  // namespace rewa
