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

#include "rewa/encoding.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "rewa/errors.hpp"

namespace rewa {

namespace {

Column identity_column(MonoidKind kind, std::uint64_t n) {
  Column c;
  c.kind = kind;
  switch (kind) {
    case MonoidKind::kBoolean:
      c.words.assign((n + 63) / 64, 0);
      break;
    case MonoidKind::kNatural:
      c.words.assign(n, 0);
      break;
    case MonoidKind::kReal:
      c.values.assign(n, 0.0);
      break;
    case MonoidKind::kTropical:
      c.values.assign(n, kTropicalInfinity);
      break;
    case MonoidKind::kProduct:
      throw TypeError("columns hold leaf carriers only");
  }
  return c;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

MonoidElement column_element(const Column& c, std::uint64_t j) {
  switch (c.kind) {
    case MonoidKind::kBoolean:
      return MonoidElement::boolean(c.bit(j));
    case MonoidKind::kNatural:
      return MonoidElement::natural(c.words[j]);
    case MonoidKind::kReal:
      return MonoidElement::real(c.values[j]);
    case MonoidKind::kTropical:
      return MonoidElement::tropical(c.values[j]);
    case MonoidKind::kProduct:
      break;
  }
  throw TypeError("columns hold leaf carriers only");
}

MonoidElement assemble(const MonoidSpec& spec, const std::vector<Column>& columns, std::size_t& cursor,
                       std::uint64_t j) {
  if (spec.kind() != MonoidKind::kProduct) return column_element(columns[cursor++], j);
  MonoidElement a = assemble(spec.first(), columns, cursor, j);
  MonoidElement b = assemble(spec.second(), columns, cursor, j);
  return MonoidElement::pair(std::move(a), std::move(b));
}

}  // namespace

Encoding::Encoding(EncodingHeader header, std::vector<Column> columns)
    : header_(std::move(header)), columns_(std::move(columns)) {
  const auto leaves = header_.monoid.leaves();
  if (leaves.size() != columns_.size()) throw InvalidArgument("encoding needs one column per monoid leaf");
  const std::uint64_t n = header_.buckets;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const Column& col = columns_[c];
    if (col.kind != leaves[c].first->kind()) throw InvalidArgument("column carrier does not match monoid leaf");
    const bool ok = col.kind == MonoidKind::kBoolean   ? col.words.size() == (n + 63) / 64 && col.values.empty()
                    : col.kind == MonoidKind::kNatural ? col.words.size() == n && col.values.empty()
                                                       : col.values.size() == n && col.words.empty();
    if (!ok) throw InvalidArgument("column length does not match bucket count");
  }
}

MonoidElement Encoding::at(std::uint64_t j) const {
  if (j >= size()) throw InvalidArgument("bucket index out of range");
  std::size_t cursor = 0;
  return assemble(header_.monoid, columns_, cursor, j);
}

std::uint64_t Encoding::non_identity_count() const {
  std::uint64_t count = 0;
  for (std::uint64_t j = 0; j < size(); ++j) {
    bool identity = true;
    for (const Column& c : columns_) {
      switch (c.kind) {
        case MonoidKind::kBoolean:
          identity = identity && !c.bit(j);
          break;
        case MonoidKind::kNatural:
          identity = identity && c.words[j] == 0;
          break;
        case MonoidKind::kReal:
          identity = identity && c.values[j] == 0.0;
          break;
        case MonoidKind::kTropical:
          identity = identity && c.values[j] == kTropicalInfinity;
          break;
        case MonoidKind::kProduct:
          break;
      }
    }
    if (!identity) ++count;
  }
  return count;
}

bool operator==(const Encoding& a, const Encoding& b) {
  if (!(a.header_ == b.header_) || a.columns_.size() != b.columns_.size()) return false;
  for (std::size_t c = 0; c < a.columns_.size(); ++c) {
    const Column& x = a.columns_[c];
    const Column& y = b.columns_[c];
    if (x.kind != y.kind || x.words != y.words || !same_bits(x.values, y.values)) return false;
  }
  return true;
}

Encoder::Encoder(WitnessSpace space, HashFamily family, MonoidSpec spec)
    : space_(std::make_shared<const WitnessSpace>(std::move(space))),
      family_(std::move(family)),
      header_{.monoid = std::move(spec),
              .seed = family_.seed(),
              .num_functions = family_.num_functions(),
              .universe = family_.universe(),
              .buckets = family_.buckets(),
              .index_base = family_.index_base(),
              .space_fingerprint = space_->fingerprint()} {
  if (family_.universe() != space_->size()) {
    throw InvalidArgument("hash family universe " + std::to_string(family_.universe()) +
                          " does not match witness count " + std::to_string(space_->size()));
  }
  if (!space_->emits_into(header_.monoid)) throw TypeError("monoid spec does not match the witness space carrier");

  std::vector<bool> path;
  collect_leaves(*space_, 0, path);

  const std::uint32_t K = family_.num_functions();
  const std::uint64_t m = space_->size();
  bucket_offsets_.reserve(m + 1);
  bucket_table_.reserve(m * K);
  std::vector<std::uint64_t> scratch(K);
  bucket_offsets_.push_back(0);
  for (std::uint64_t i = 0; i < m; ++i) {
    for (std::uint32_t k = 0; k < K; ++k) scratch[k] = family_.eval_unchecked(k, i);
    std::sort(scratch.begin(), scratch.end());
    const auto last = std::unique(scratch.begin(), scratch.end());
    bucket_table_.insert(bucket_table_.end(), scratch.begin(), last);
    bucket_offsets_.push_back(bucket_table_.size());
  }
}

void Encoder::collect_leaves(const WitnessSpace& space, std::uint64_t offset, std::vector<bool>& path) {
  if (!space.is_product()) {
    leaves_.push_back({&space, space.carrier(), offset, path});
    return;
  }
  path.push_back(false);
  collect_leaves(space.first(), offset, path);
  path.back() = true;
  collect_leaves(space.second(), offset + space.first().size(), path);
  path.pop_back();
}

std::span<const std::uint64_t> Encoder::buckets_of(std::uint64_t witness) const {
  if (witness >= space_->size()) throw InvalidArgument("witness index out of range");
  return {bucket_table_.data() + bucket_offsets_[witness], bucket_table_.data() + bucket_offsets_[witness + 1]};
}

std::vector<Column> Encoder::empty_columns() const {
  std::vector<Column> cols;
  cols.reserve(leaves_.size());
  for (const Leaf& leaf : leaves_) cols.push_back(identity_column(leaf.kind, header_.buckets));
  return cols;
}

const DataItem& Encoder::item_for(const Leaf& leaf, const DataItem& root) const {
  const DataItem* item = &root;
  for (const bool second : leaf.path) {
    const auto* parts = item->get_if<ItemPair>();
    if (parts == nullptr) throw InvalidArgument("product witness space expects an item pair");
    item = second ? parts->second.get() : parts->first.get();
  }
  return *item;
}

void Encoder::fold(Column& column, std::uint64_t global_witness, const ActiveWitness& w) const {
  const std::uint64_t* begin = bucket_table_.data() + bucket_offsets_[global_witness];
  const std::uint64_t* end = bucket_table_.data() + bucket_offsets_[global_witness + 1];
  switch (column.kind) {
    case MonoidKind::kBoolean:
      if (w.count != 0) {
        for (const std::uint64_t* j = begin; j != end; ++j) column.words[*j >> 6] |= std::uint64_t{1} << (*j & 63);
      }
      break;
    case MonoidKind::kNatural:
      for (const std::uint64_t* j = begin; j != end; ++j) {
        column.words[*j] = scalar::saturating_add(column.words[*j], w.count);
      }
      break;
    case MonoidKind::kReal:
      for (const std::uint64_t* j = begin; j != end; ++j) column.values[*j] += w.value;
      break;
    case MonoidKind::kTropical:
      for (const std::uint64_t* j = begin; j != end; ++j) column.values[*j] = std::min(column.values[*j], w.value);
      break;
    case MonoidKind::kProduct:
      throw TypeError("columns hold leaf carriers only");
  }
}

Encoding Encoder::encode(const DataItem& x) const {
  std::vector<Column> cols = empty_columns();
  for (std::size_t c = 0; c < leaves_.size(); ++c) {
    const Leaf& leaf = leaves_[c];
    for (const ActiveWitness& w : leaf.space->active(item_for(leaf, x))) {
      fold(cols[c], leaf.witness_offset + w.index, w);
    }
  }
  return Encoding(header_, std::move(cols));
}

Encoding Encoder::encode_in_order(const DataItem& x, std::span<const std::uint64_t> order) const {
  const std::uint64_t m = space_->size();
  if (order.size() != m) throw InvalidArgument("witness order must list every witness once");
  std::vector<bool> seen(m, false);
  for (const std::uint64_t i : order) {
    if (i >= m || seen[i]) throw InvalidArgument("witness order must be a permutation of [0, m)");
    seen[i] = true;
  }

  // Dense per-witness values; witnesses absent from active() hold the neutral 0.
  std::vector<ActiveWitness> values(m);
  std::vector<std::size_t> leaf_of(m);
  for (std::size_t c = 0; c < leaves_.size(); ++c) {
    const Leaf& leaf = leaves_[c];
    for (std::uint64_t i = 0; i < leaf.space->size(); ++i) {
      values[leaf.witness_offset + i] = {i, 0, 0.0};
      leaf_of[leaf.witness_offset + i] = c;
    }
    for (const ActiveWitness& w : leaf.space->active(item_for(leaf, x))) values[leaf.witness_offset + w.index] = w;
  }

  std::vector<Column> cols = empty_columns();
  for (const std::uint64_t i : order) fold(cols[leaf_of[i]], i, values[i]);
  return Encoding(header_, std::move(cols));
}

Encoding encode(const WitnessSpace& space, const HashFamily& family, const MonoidSpec& spec, const DataItem& x) {
  return Encoder(space, family, spec).encode(x);
}

}  // namespace rewa
