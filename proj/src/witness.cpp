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

#include "rewa/witness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "rewa/errors.hpp"
#include "rewa/hashing.hpp"

namespace rewa {

namespace {

class Fingerprint {
 public:
  explicit Fingerprint(std::uint64_t tag) : h_(mix64(tag ^ 0x7265776173706163ULL)) {}
  Fingerprint& add(std::uint64_t v) {
    h_ = mix64(h_ ^ v) + 0x9e3779b97f4a7c15ULL;
    return *this;
  }
  Fingerprint& add(double v) { return add(std::bit_cast<std::uint64_t>(v)); }
  Fingerprint& add(std::span<const double> vs) {
    add(static_cast<std::uint64_t>(vs.size()));
    for (double v : vs) add(v);
    return *this;
  }
  [[nodiscard]] std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const IdSet& require_ids(const DataItem& x, std::uint64_t universe) {
  const auto* s = x.get_if<IdSet>();
  if (s == nullptr) throw InvalidArgument("witness space expects an id set");
  if (!s->ids.empty() && s->ids.back() >= universe) {
    throw InvalidArgument("id " + std::to_string(s->ids.back()) + " outside universe of " + std::to_string(universe));
  }
  return *s;
}

const CountMap& require_counts(const DataItem& x, std::uint64_t vocabulary) {
  const auto* c = x.get_if<CountMap>();
  if (c == nullptr) throw InvalidArgument("witness space expects a count map");
  if (!c->entries.empty() && c->entries.back().first >= vocabulary) {
    throw InvalidArgument("id " + std::to_string(c->entries.back().first) + " outside vocabulary");
  }
  return *c;
}

const DenseVector& require_vector(const DataItem& x, std::size_t dim) {
  const auto* v = x.get_if<DenseVector>();
  if (v == nullptr) throw InvalidArgument("witness space expects a dense vector");
  if (v->values.size() != dim) {
    throw InvalidArgument("vector has dimension " + std::to_string(v->values.size()) + ", expected " +
                          std::to_string(dim));
  }
  return *v;
}

std::uint64_t require_vertex(const DataItem& x, std::uint64_t vertex_count) {
  const auto* v = x.get_if<VertexId>();
  if (v == nullptr) throw InvalidArgument("witness space expects a vertex id");
  if (v->vertex >= vertex_count) throw InvalidArgument("vertex " + std::to_string(v->vertex) + " not in graph");
  return v->vertex;
}

MonoidElement carrier_identity(const WitnessSpace& space) {
  switch (space.carrier()) {
    case MonoidKind::kBoolean:
      return MonoidElement::boolean(false);
    case MonoidKind::kNatural:
      return MonoidElement::natural(0);
    case MonoidKind::kReal:
      return MonoidElement::real(0.0);
    case MonoidKind::kTropical:
      return MonoidElement::tropical(kTropicalInfinity);
    case MonoidKind::kProduct:
      break;
  }
  return MonoidElement::pair(carrier_identity(space.first()), carrier_identity(space.second()));
}

}  // namespace

IdSet IdSet::from_unsorted(std::vector<std::uint64_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return IdSet{std::move(ids)};
}

CountMap CountMap::from_unsorted(std::vector<std::pair<std::uint64_t, std::uint64_t>> entries) {
  std::sort(entries.begin(), entries.end());
  CountMap out;
  for (const auto& [id, c] : entries) {
    if (c == 0) continue;
    if (!out.entries.empty() && out.entries.back().first == id) {
      out.entries.back().second = scalar::saturating_add(out.entries.back().second, c);
    } else {
      out.entries.emplace_back(id, c);
    }
  }
  return out;
}

DataItem DataItem::pair(DataItem first, DataItem second) {
  return DataItem(ItemPair{std::make_shared<const DataItem>(std::move(first)),
                           std::make_shared<const DataItem>(std::move(second))});
}

void DataItem::validate() const {
  std::visit(Overloaded{
                 [](const IdSet& s) {
                   for (std::size_t i = 1; i < s.ids.size(); ++i) {
                     if (s.ids[i] <= s.ids[i - 1]) throw InvalidArgument("id set must be strictly increasing");
                   }
                 },
                 [](const CountMap& c) {
                   for (std::size_t i = 0; i < c.entries.size(); ++i) {
                     if (c.entries[i].second == 0) throw InvalidArgument("count map entries must be >= 1");
                     if (i > 0 && c.entries[i].first <= c.entries[i - 1].first) {
                       throw InvalidArgument("count map ids must be strictly increasing");
                     }
                   }
                 },
                 [](const DenseVector& v) {
                   for (double x : v.values) {
                     if (!std::isfinite(x)) throw InvalidArgument("dense vector entries must be finite");
                   }
                 },
                 [](const VertexId&) {},
                 [](const ItemPair& p) {
                   p.first->validate();
                   p.second->validate();
                 },
             },
             value_);
}

DenseVector l2_normalize(const DenseVector& x) {
  double sq = 0.0;
  for (double v : x.values) {
    if (!std::isfinite(v)) throw InvalidArgument("cannot normalize a non-finite vector");
    sq += v * v;
  }
  if (sq <= 0.0) throw InvalidArgument("cannot normalize the zero vector");
  const double norm = std::sqrt(sq);
  DenseVector out{x.values};
  for (double& v : out.values) v /= norm;
  return out;
}

WitnessSpace WitnessSpace::boolean_space(std::uint64_t universe) {
  if (universe == 0) throw InvalidArgument("boolean witness space needs a non-empty universe");
  return WitnessSpace(SetIndicator{universe}, universe, MonoidKind::kBoolean, 1.0, WitnessTransform::kNone,
                      Fingerprint(1).add(universe).value());
}

WitnessSpace WitnessSpace::count_space(std::uint64_t vocabulary, std::uint64_t clip) {
  if (vocabulary == 0) throw InvalidArgument("count witness space needs a non-empty vocabulary");
  if (clip == 0) throw InvalidArgument("clip bound must be positive");
  const auto transform = clip == kNaturalSaturation ? WitnessTransform::kNone : WitnessTransform::kClip;
  return WitnessSpace(Count{vocabulary, clip}, vocabulary, MonoidKind::kNatural, static_cast<double>(clip), transform,
                      Fingerprint(2).add(vocabulary).add(clip).value());
}

WitnessSpace WitnessSpace::log_count_space(std::uint64_t vocabulary, std::uint64_t clip) {
  if (vocabulary == 0) throw InvalidArgument("count witness space needs a non-empty vocabulary");
  if (clip == 0) throw InvalidArgument("clip bound must be positive");
  const double bound = std::log1p(static_cast<double>(clip));
  return WitnessSpace(Count{vocabulary, clip}, vocabulary, MonoidKind::kReal, bound, WitnessTransform::kLogCompress,
                      Fingerprint(3).add(vocabulary).add(clip).value());
}

WitnessSpace WitnessSpace::fourier_space(std::size_t dim, std::uint64_t features, double bandwidth,
                                         std::uint64_t seed) {
  if (dim == 0 || features == 0) throw InvalidArgument("fourier witness space needs dim >= 1 and m >= 1");
  if (!std::isfinite(bandwidth) || bandwidth <= 0.0) throw InvalidArgument("bandwidth must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, bandwidth);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> freq(features * dim);
  std::vector<double> offsets(features);
  for (std::uint64_t i = 0; i < features; ++i) {
    for (std::size_t d = 0; d < dim; ++d) freq[i * dim + d] = normal(rng);
    offsets[i] = phase(rng);
  }
  return fourier_space(dim, std::move(freq), std::move(offsets));
}

WitnessSpace WitnessSpace::fourier_space(std::size_t dim, std::vector<double> frequencies,
                                         std::vector<double> offsets) {
  if (dim == 0 || offsets.empty() || frequencies.size() != offsets.size() * dim) {
    throw InvalidArgument("fourier frequencies must be features x dim with one offset per feature");
  }
  const std::uint64_t m = offsets.size();
  const double scale = std::sqrt(2.0 / static_cast<double>(m));
  const auto fp = Fingerprint(4).add(static_cast<std::uint64_t>(dim)).add(frequencies).add(offsets).value();
  return WitnessSpace(Fourier{dim, std::move(frequencies), std::move(offsets), scale}, m, MonoidKind::kReal, scale,
                      WitnessTransform::kNone, fp);
}

WitnessSpace WitnessSpace::embedding_space(std::size_t dim, double bound) {
  if (dim == 0) throw InvalidArgument("embedding witness space needs dim >= 1");
  if (!std::isfinite(bound) || bound <= 0.0) throw InvalidArgument("embedding bound must be positive");
  return WitnessSpace(Embedding{dim}, dim, MonoidKind::kReal, bound, WitnessTransform::kNone,
                      Fingerprint(5).add(static_cast<std::uint64_t>(dim)).add(bound).value());
}

WitnessSpace WitnessSpace::priority_space(std::uint64_t universe, std::uint64_t seed) {
  if (universe == 0) throw InvalidArgument("priority witness space needs a non-empty universe");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> priorities(universe);
  for (double& p : priorities) p = unit(rng);
  const auto fp = Fingerprint(6).add(universe).add(seed).value();
  return WitnessSpace(Priority{std::move(priorities)}, universe, MonoidKind::kTropical, 1.0, WitnessTransform::kNone,
                      fp);
}

WitnessSpace WitnessSpace::tropical_space(const Graph& graph, std::vector<std::uint64_t> landmarks,
                                          double diameter) {
  if (landmarks.empty()) throw InvalidArgument("tropical witness space needs at least one landmark");
  if (!std::isfinite(diameter) || diameter <= 0.0) throw InvalidArgument("diameter bound must be positive");
  const std::uint64_t v_count = graph.vertex_count();
  std::vector<double> distances;
  distances.reserve(landmarks.size() * v_count);
  for (const std::uint64_t l : landmarks) {
    if (l >= v_count) throw InvalidArgument("landmark " + std::to_string(l) + " not in graph");
    for (const double d : graph.shortest_paths(l)) distances.push_back(std::isinf(d) ? d : std::min(d, diameter));
  }
  Fingerprint fp(7);
  fp.add(graph.fingerprint()).add(diameter);
  for (const std::uint64_t l : landmarks) fp.add(l);
  const std::uint64_t m = landmarks.size();
  return WitnessSpace(Landmark{v_count, std::move(landmarks), diameter, std::move(distances)}, m,
                      MonoidKind::kTropical, diameter, WitnessTransform::kNone, fp.value());
}

WitnessSpace WitnessSpace::product_space(const WitnessSpace& first, const WitnessSpace& second) {
  const auto fp = Fingerprint(8).add(first.fingerprint()).add(second.fingerprint()).value();
  return WitnessSpace(
      Product{std::make_shared<const WitnessSpace>(first), std::make_shared<const WitnessSpace>(second)},
      first.size() + second.size(), MonoidKind::kProduct, std::max(first.bound(), second.bound()),
      WitnessTransform::kNone, fp);
}

const WitnessSpace& WitnessSpace::first() const {
  if (const auto* p = std::get_if<Product>(&source_)) return *p->first;
  throw TypeError("first() on a non-product witness space");
}

const WitnessSpace& WitnessSpace::second() const {
  if (const auto* p = std::get_if<Product>(&source_)) return *p->second;
  throw TypeError("second() on a non-product witness space");
}

bool WitnessSpace::emits_into(const MonoidSpec& spec) const noexcept {
  if (spec.kind() != carrier_) return false;
  if (const auto* p = std::get_if<Product>(&source_)) {
    return p->first->emits_into(spec.first()) && p->second->emits_into(spec.second());
  }
  if (const auto* l = std::get_if<Landmark>(&source_)) return l->diameter <= spec.diameter();
  return true;
}

std::vector<ActiveWitness> WitnessSpace::active(const DataItem& x) const {
  std::vector<ActiveWitness> out;
  std::visit(Overloaded{
                 [&](const SetIndicator& s) {
                   const IdSet& ids = require_ids(x, s.universe);
                   out.reserve(ids.ids.size());
                   for (const std::uint64_t id : ids.ids) out.push_back({id, 1, 0.0});
                 },
                 [&](const Count& c) {
                   const CountMap& counts = require_counts(x, c.vocabulary);
                   out.reserve(counts.entries.size());
                   for (const auto& [id, raw] : counts.entries) {
                     const std::uint64_t clipped = std::min(raw, c.clip);
                     if (transform_ == WitnessTransform::kLogCompress) {
                       out.push_back({id, 0, std::log1p(static_cast<double>(clipped))});
                     } else {
                       out.push_back({id, clipped, 0.0});
                     }
                   }
                 },
                 [&](const Fourier& f) {
                   const DenseVector& v = require_vector(x, f.dim);
                   out.reserve(m_);
                   for (std::uint64_t i = 0; i < m_; ++i) {
                     const double* w = f.frequencies.data() + i * f.dim;
                     double dot = 0.0;
                     for (std::size_t d = 0; d < f.dim; ++d) dot += w[d] * v.values[d];
                     out.push_back({i, 0, f.scale * std::cos(dot + f.offsets[i])});
                   }
                 },
                 [&](const Embedding& e) {
                   const DenseVector& v = require_vector(x, e.dim);
                   out.reserve(m_);
                   for (std::uint64_t i = 0; i < m_; ++i) {
                     if (!(std::abs(v.values[i]) <= bound_)) {
                       throw InvalidArgument("embedding coordinate exceeds the witness bound");
                     }
                     out.push_back({i, 0, v.values[i]});
                   }
                 },
                 [&](const Priority& p) {
                   const IdSet& ids = require_ids(x, m_);
                   out.reserve(m_);
                   auto it = ids.ids.begin();
                   for (std::uint64_t i = 0; i < m_; ++i) {
                     const bool present = it != ids.ids.end() && *it == i;
                     if (present) ++it;
                     out.push_back({i, 0, present ? p.priorities[i] : kTropicalInfinity});
                   }
                 },
                 [&](const Landmark& l) {
                   const std::uint64_t v = require_vertex(x, l.vertex_count);
                   out.reserve(m_);
                   for (std::uint64_t i = 0; i < m_; ++i) out.push_back({i, 0, l.distances[i * l.vertex_count + v]});
                 },
                 [&](const Product&) { throw TypeError("active() is defined per channel of a product space"); },
             },
             source_);
  return out;
}

MonoidElement WitnessSpace::element_of(const ActiveWitness& w) const {
  switch (carrier_) {
    case MonoidKind::kBoolean:
      return MonoidElement::boolean(w.count != 0);
    case MonoidKind::kNatural:
      return MonoidElement::natural(w.count);
    case MonoidKind::kReal:
      return MonoidElement::real(w.value);
    case MonoidKind::kTropical:
      return MonoidElement::tropical(w.value);
    case MonoidKind::kProduct:
      break;
  }
  throw TypeError("product witness values are pairs; evaluate the channels");
}

MonoidElement WitnessSpace::evaluate(std::uint64_t i, const DataItem& x) const {
  if (i >= m_) throw InvalidArgument("witness index " + std::to_string(i) + " out of range");
  if (const auto* p = std::get_if<Product>(&source_)) {
    const auto* parts = x.get_if<ItemPair>();
    if (parts == nullptr) throw InvalidArgument("product witness space expects an item pair");
    const std::uint64_t m1 = p->first->size();
    if (i < m1) {
      return MonoidElement::pair(p->first->evaluate(i, *parts->first), carrier_identity(*p->second));
    }
    return MonoidElement::pair(carrier_identity(*p->first), p->second->evaluate(i - m1, *parts->second));
  }
  // Sparse sources: look the witness up directly instead of materializing all of x.
  if (const auto* s = std::get_if<SetIndicator>(&source_)) {
    const IdSet& ids = require_ids(x, s->universe);
    return MonoidElement::boolean(std::binary_search(ids.ids.begin(), ids.ids.end(), i));
  }
  if (const auto* c = std::get_if<Count>(&source_)) {
    const CountMap& counts = require_counts(x, c->vocabulary);
    const auto it = std::lower_bound(counts.entries.begin(), counts.entries.end(), i,
                                     [](const auto& e, std::uint64_t id) { return e.first < id; });
    const std::uint64_t raw = (it != counts.entries.end() && it->first == i) ? it->second : 0;
    const std::uint64_t clipped = std::min(raw, c->clip);
    if (transform_ == WitnessTransform::kLogCompress) {
      return MonoidElement::real(std::log1p(static_cast<double>(clipped)));
    }
    return MonoidElement::natural(clipped);
  }
  const std::vector<ActiveWitness> all = active(x);
  return element_of(all[i]);
}

namespace {

double sparse_or_dense_overlap(const WitnessSpace& space, const MonoidSpec& spec, const DataItem& x,
                               const DataItem& y) {
  const std::vector<ActiveWitness> ax = space.active(x);
  const std::vector<ActiveWitness> ay = space.active(y);
  const MonoidElement neutral = spec.identity();
  double total = 0.0;
  std::uint64_t visited = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < ax.size() || b < ay.size()) {
    if (b == ay.size() || (a < ax.size() && ax[a].index < ay[b].index)) {
      total += spec.phi(space.element_of(ax[a++]), neutral);
    } else if (a == ax.size() || ay[b].index < ax[a].index) {
      total += spec.phi(neutral, space.element_of(ay[b++]));
    } else {
      total += spec.phi(space.element_of(ax[a++]), space.element_of(ay[b++]));
    }
    ++visited;
  }
  const std::uint64_t untouched = space.size() - visited;
  if (untouched > 0) total += static_cast<double>(untouched) * spec.phi(neutral, neutral);
  return total;
}

}  // namespace

double ideal_overlap(const WitnessSpace& space, const MonoidSpec& spec, const DataItem& x, const DataItem& y) {
  if (!space.emits_into(spec)) throw TypeError("monoid spec does not match the witness space carrier");
  if (!space.is_product()) return sparse_or_dense_overlap(space, spec, x, y);

  const auto* px = x.get_if<ItemPair>();
  const auto* py = y.get_if<ItemPair>();
  if (px == nullptr || py == nullptr) throw InvalidArgument("product witness space expects item pairs");
  const MonoidSpec& s1 = spec.first();
  const MonoidSpec& s2 = spec.second();
  // Witnesses of one channel carry the other channel's identity.
  const double d1 = ideal_overlap(space.first(), s1, *px->first, *py->first) +
                    static_cast<double>(space.second().size()) * s1.phi(s1.identity(), s1.identity());
  const double d2 = ideal_overlap(space.second(), s2, *px->second, *py->second) +
                    static_cast<double>(space.first().size()) * s2.phi(s2.identity(), s2.identity());
  return spec.weight1() * d1 + spec.weight2() * d2;
}

}  // namespace rewa
