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

// Witness projection: B(x)[j] folds, with the monoid combine, every witness i
// for which some h_k(i) = j. A witness that lands in the same bucket under two
// hash functions contributes once.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rewa/hashing.hpp"
#include "rewa/monoid.hpp"
#include "rewa/witness.hpp"

namespace rewa {

struct EncodingHeader {
  MonoidSpec monoid;
  std::uint64_t seed = 0;
  std::uint32_t num_functions = 0;
  std::uint64_t universe = 0;
  std::uint64_t buckets = 0;
  std::uint64_t index_base = 0;
  std::uint64_t space_fingerprint = 0;

  friend bool operator==(const EncodingHeader&, const EncodingHeader&) = default;
};

// Bucket values of one leaf carrier. Boolean buckets are packed 64 per word
// (bucket j is bit j % 64 of word j / 64); Natural buckets are one word each;
// Real and Tropical buckets live in `values`.
struct Column {
  MonoidKind kind = MonoidKind::kBoolean;
  std::vector<std::uint64_t> words;
  std::vector<double> values;

  [[nodiscard]] bool bit(std::uint64_t j) const noexcept { return (words[j >> 6] >> (j & 63)) & 1U; }
};

// A product encoding stores one column per leaf of the monoid tree, in
// depth-first order; bucket j of the product is the tuple of column entries j.
class Encoding {
 public:
  // Throws InvalidArgument when the columns do not match the header's monoid and n.
  Encoding(EncodingHeader header, std::vector<Column> columns);

  [[nodiscard]] const EncodingHeader& header() const noexcept { return header_; }
  [[nodiscard]] const MonoidSpec& monoid() const noexcept { return header_.monoid; }
  [[nodiscard]] std::uint64_t size() const noexcept { return header_.buckets; }
  [[nodiscard]] const std::vector<Column>& columns() const noexcept { return columns_; }

  [[nodiscard]] MonoidElement at(std::uint64_t j) const;

  // Buckets not equal to the monoid identity.
  [[nodiscard]] std::uint64_t non_identity_count() const;

  // Header and payload equal bit for bit.
  friend bool operator==(const Encoding& a, const Encoding& b);

 private:
  EncodingHeader header_;
  std::vector<Column> columns_;
};

class Encoder {
 public:
  // Throws InvalidArgument when family.universe() != space.size(), TypeError when
  // the monoid's carrier does not match the space.
  Encoder(WitnessSpace space, HashFamily family, MonoidSpec spec);

  // Folds active witnesses in ascending index order.
  [[nodiscard]] Encoding encode(const DataItem& x) const;

  // Folds every witness, neutral ones included, in the given order. `order` must
  // be a permutation of [0, m).
  [[nodiscard]] Encoding encode_in_order(const DataItem& x, std::span<const std::uint64_t> order) const;

  // Distinct buckets {h_k(i) : k in [K]} of witness i, ascending.
  [[nodiscard]] std::span<const std::uint64_t> buckets_of(std::uint64_t witness) const;

  [[nodiscard]] const EncodingHeader& header() const noexcept { return header_; }
  [[nodiscard]] const WitnessSpace& space() const noexcept { return *space_; }
  [[nodiscard]] const HashFamily& family() const noexcept { return family_; }
  [[nodiscard]] const MonoidSpec& spec() const noexcept { return header_.monoid; }

 private:
  struct Leaf {
    const WitnessSpace* space;
    MonoidKind kind;
    std::uint64_t witness_offset;
    std::vector<bool> path;  // false = first, true = second, from the root item
  };

  void collect_leaves(const WitnessSpace& space, std::uint64_t offset, std::vector<bool>& path);
  [[nodiscard]] std::vector<Column> empty_columns() const;
  [[nodiscard]] const DataItem& item_for(const Leaf& leaf, const DataItem& root) const;
  void fold(Column& column, std::uint64_t global_witness, const ActiveWitness& w) const;

  std::shared_ptr<const WitnessSpace> space_;  // leaves_ point into it
  HashFamily family_;
  EncodingHeader header_;
  std::vector<Leaf> leaves_;
  std::vector<std::uint64_t> bucket_table_;
  std::vector<std::uint64_t> bucket_offsets_;
};

// One-shot form of Encoder::encode.
[[nodiscard]] Encoding encode(const WitnessSpace& space, const HashFamily& family, const MonoidSpec& spec,
                              const DataItem& x);

inline constexpr std::uint16_t kEncodingFormatVersion = 1;

// Binary layout, all integers and floats little-endian:
//   "REWA" | u16 version | monoid tree | u64 seed | u32 K | u64 m | u64 n |
//   u64 index_base | u64 space fingerprint | leaf columns
// monoid tree: u8 kind, then Natural u64 clip | Tropical f64 D |
//   Product f64 l1, f64 l2, tree, tree.
// Columns: Boolean ceil(n/8) bytes (LSB first), Natural n x u64,
//   Real / Tropical n x f64 (+inf kept as IEEE-754 infinity).
[[nodiscard]] std::vector<std::uint8_t> serialize(const Encoding& encoding);
// Throws FormatError with the failing byte offset; never returns a partial encoding.
[[nodiscard]] Encoding deserialize(std::span<const std::uint8_t> bytes);

// Concatenated records, each prefixed with a u32 byte length.
[[nodiscard]] std::vector<std::uint8_t> serialize_corpus(std::span<const Encoding> encodings);
[[nodiscard]] std::vector<Encoding> deserialize_corpus(std::span<const std::uint8_t> bytes);

}  // namespace rewa
