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

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "rewa/encoding.hpp"
#include "rewa/errors.hpp"

namespace rewa {

namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'E', 'W', 'A'};
constexpr int kMaxMonoidDepth = 32;

class Writer {
 public:
  void bytes(const void* p, std::size_t len) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + len);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, std::size_t base) : data_(data), base_(base) {}

  [[nodiscard]] std::size_t offset() const { return base_ + pos_; }
  [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }

  void need(std::size_t len, const char* what) const {
    if (remaining() < len) throw FormatError(std::string("truncated input reading ") + what, offset());
  }
  std::span<const std::uint8_t> bytes(std::size_t len, const char* what) {
    need(len, what);
    auto s = data_.subspan(pos_, len);
    pos_ += len;
    return s;
  }
  std::uint8_t u8(const char* what) { return bytes(1, what)[0]; }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(le(2, what)); }
  std::uint32_t u32(const char* what) { return static_cast<std::uint32_t>(le(4, what)); }
  std::uint64_t u64(const char* what) { return le(8, what); }
  double f64(const char* what) { return std::bit_cast<double>(le(8, what)); }

 private:
  std::uint64_t le(std::size_t width, const char* what) {
    const auto b = bytes(width, what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

void write_monoid(Writer& w, const MonoidSpec& spec) {
  w.u8(static_cast<std::uint8_t>(spec.kind()));
  switch (spec.kind()) {
    case MonoidKind::kNatural:
      w.u64(spec.clip_bound());
      break;
    case MonoidKind::kTropical:
      w.f64(spec.diameter());
      break;
    case MonoidKind::kProduct:
      w.f64(spec.weight1());
      w.f64(spec.weight2());
      write_monoid(w, spec.first());
      write_monoid(w, spec.second());
      break;
    case MonoidKind::kBoolean:
    case MonoidKind::kReal:
      break;
  }
}

MonoidSpec read_monoid(Reader& r, int depth) {
  const std::size_t at = r.offset();
  if (depth > kMaxMonoidDepth) throw FormatError("monoid tree nested too deeply", at);
  const std::uint8_t kind = r.u8("monoid kind");
  try {
    switch (static_cast<MonoidKind>(kind)) {
      case MonoidKind::kBoolean:
        return MonoidSpec::boolean();
      case MonoidKind::kNatural:
        return MonoidSpec::natural(r.u64("clip bound"));
      case MonoidKind::kReal:
        return MonoidSpec::real();
      case MonoidKind::kTropical:
        return MonoidSpec::tropical(r.f64("diameter"));
      case MonoidKind::kProduct: {
        const double w1 = r.f64("product weight");
        const double w2 = r.f64("product weight");
        MonoidSpec a = read_monoid(r, depth + 1);
        MonoidSpec b = read_monoid(r, depth + 1);
        return product_monoid(a, b, w1, w2);
      }
    }
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("invalid monoid parameters: ") + e.what(), at);
  }
  throw FormatError("unknown monoid kind " + std::to_string(kind), at);
}

}  // namespace

std::vector<std::uint8_t> serialize(const Encoding& encoding) {
  Writer w;
  const EncodingHeader& h = encoding.header();
  w.bytes(kMagic, sizeof kMagic);
  w.u16(kEncodingFormatVersion);
  write_monoid(w, h.monoid);
  w.u64(h.seed);
  w.u32(h.num_functions);
  w.u64(h.universe);
  w.u64(h.buckets);
  w.u64(h.index_base);
  w.u64(h.space_fingerprint);
  const std::uint64_t n = h.buckets;
  for (const Column& c : encoding.columns()) {
    switch (c.kind) {
      case MonoidKind::kBoolean:
        for (std::uint64_t byte = 0; byte < (n + 7) / 8; ++byte) {
          w.u8(static_cast<std::uint8_t>(c.words[byte / 8] >> (8 * (byte % 8))));
        }
        break;
      case MonoidKind::kNatural:
        for (const std::uint64_t v : c.words) w.u64(v);
        break;
      case MonoidKind::kReal:
      case MonoidKind::kTropical:
        for (const double v : c.values) w.f64(v);
        break;
      case MonoidKind::kProduct:
        break;
    }
  }
  return w.take();
}

namespace {

Encoding read_encoding(Reader& r) {
  const auto magic = r.bytes(4, "magic");
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError("bad magic", r.offset() - 4);
  const std::uint16_t version = r.u16("version");
  if (version != kEncodingFormatVersion) {
    throw FormatError("unsupported format version " + std::to_string(version), r.offset() - 2);
  }
  MonoidSpec monoid = read_monoid(r, 0);
  const std::uint64_t seed = r.u64("seed");
  const std::uint32_t num_functions = r.u32("hash count");
  const std::uint64_t universe = r.u64("witness count");
  const std::size_t n_at = r.offset();
  const std::uint64_t n = r.u64("bucket count");
  const std::uint64_t index_base = r.u64("index base");
  const std::uint64_t fingerprint = r.u64("space fingerprint");
  if (n == 0) throw FormatError("bucket count must be positive", n_at);

  const auto leaves = monoid.leaves();
  std::vector<Column> columns;
  columns.reserve(leaves.size());
  for (const auto& [leaf, weight] : leaves) {
    Column c;
    c.kind = leaf->kind();
    if (c.kind == MonoidKind::kBoolean) {
      const std::uint64_t len = (n + 7) / 8;
      const auto raw = r.bytes(len, "boolean payload");
      c.words.assign((n + 63) / 64, 0);
      for (std::uint64_t byte = 0; byte < len; ++byte) {
        c.words[byte / 8] |= static_cast<std::uint64_t>(raw[byte]) << (8 * (byte % 8));
      }
      if (n % 8 != 0 && (raw[len - 1] >> (n % 8)) != 0) {
        throw FormatError("non-zero padding bits in boolean payload", r.offset() - 1);
      }
    } else {
      if (n > r.remaining() / 8) r.need(std::numeric_limits<std::size_t>::max(), "bucket payload");
      if (c.kind == MonoidKind::kNatural) {
        c.words.resize(n);
        for (auto& v : c.words) v = r.u64("natural payload");
      } else {
        c.values.resize(n);
        for (auto& v : c.values) {
          const std::size_t at = r.offset();
          v = r.f64("float payload");
          const bool valid = c.kind == MonoidKind::kReal ? std::isfinite(v) : (!std::isnan(v) && v >= 0.0);
          if (!valid) throw FormatError("bucket value outside the carrier", at);
        }
      }
    }
    columns.push_back(std::move(c));
  }
  EncodingHeader header{.monoid = std::move(monoid),
                        .seed = seed,
                        .num_functions = num_functions,
                        .universe = universe,
                        .buckets = n,
                        .index_base = index_base,
                        .space_fingerprint = fingerprint};
  return Encoding(std::move(header), std::move(columns));
}

}  // namespace

Encoding deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, 0);
  Encoding e = read_encoding(r);
  if (r.remaining() != 0) throw FormatError("trailing bytes after encoding", r.offset());
  return e;
}

std::vector<std::uint8_t> serialize_corpus(std::span<const Encoding> encodings) {
  std::vector<std::uint8_t> out;
  for (const Encoding& e : encodings) {
    const std::vector<std::uint8_t> record = serialize(e);
    if (record.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw InvalidArgument("encoding too large for a corpus record");
    }
    Writer w;
    w.u32(static_cast<std::uint32_t>(record.size()));
    const auto prefix = w.take();
    out.insert(out.end(), prefix.begin(), prefix.end());
    out.insert(out.end(), record.begin(), record.end());
  }
  return out;
}

std::vector<Encoding> deserialize_corpus(std::span<const std::uint8_t> bytes) {
  std::vector<Encoding> out;
  Reader r(bytes, 0);
  while (r.remaining() > 0) {
    const std::uint32_t len = r.u32("record length");
    const std::size_t base = r.offset();
    Reader inner(r.bytes(len, "record"), base);
    out.push_back(read_encoding(inner));
    if (inner.remaining() != 0) throw FormatError("record length does not match its encoding", inner.offset());
  }
  return out;
}

}  // namespace rewa
