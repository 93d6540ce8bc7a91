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

#include "rewa/io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

#include "rewa/errors.hpp"

namespace rewa::io {

namespace {

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  throw InvalidArgument("line " + std::to_string(line) + ": " + why);
}

std::uint64_t parse_u64(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) bad_line(line, "not an unsigned integer: " + std::string(tok));
  return v;
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) bad_line(line, "not a decimal: " + std::string(tok));
  return v;
}

template <class F>
void for_each_line(std::istream& in, F&& f) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string t; tokens >> t;) parts.push_back(std::move(t));
    f(parts, number);
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<DataItem> read_id_sets(std::istream& in) {
  std::vector<DataItem> out;
  for_each_line(in, [&](const std::vector<std::string>& parts, std::size_t line) {
    std::vector<std::uint64_t> ids;
    for (const auto& p : parts) ids.push_back(parse_u64(p, line));
    out.emplace_back(IdSet::from_unsorted(std::move(ids)));
  });
  return out;
}

std::vector<DataItem> read_count_maps(std::istream& in) {
  std::vector<DataItem> out;
  for_each_line(in, [&](const std::vector<std::string>& parts, std::size_t line) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> entries;
    for (const auto& p : parts) {
      const auto colon = p.find(':');
      if (colon == std::string::npos) bad_line(line, "expected id:count, got " + p);
      const std::string_view view(p);
      const std::uint64_t count = parse_u64(view.substr(colon + 1), line);
      if (count == 0) bad_line(line, "counts must be >= 1");
      entries.emplace_back(parse_u64(view.substr(0, colon), line), count);
    }
    out.emplace_back(CountMap::from_unsorted(std::move(entries)));
  });
  return out;
}

std::vector<DataItem> read_vectors(std::istream& in) {
  std::vector<DataItem> out;
  std::size_t dim = 0;
  for_each_line(in, [&](const std::vector<std::string>& parts, std::size_t line) {
    if (parts.empty()) bad_line(line, "empty vector");
    if (out.empty()) dim = parts.size();
    if (parts.size() != dim) bad_line(line, "expected " + std::to_string(dim) + " components");
    DenseVector v;
    for (const auto& p : parts) v.values.push_back(parse_double(p, line));
    DataItem item(std::move(v));
    item.validate();
    out.push_back(std::move(item));
  });
  return out;
}

Graph read_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("line 1: missing 'V E' header");
  std::istringstream header(line);
  std::string v_tok;
  std::string e_tok;
  if (!(header >> v_tok >> e_tok)) bad_line(1, "expected 'V E'");
  const std::uint64_t vertices = parse_u64(v_tok, 1);
  const std::uint64_t edges = parse_u64(e_tok, 1);
  Graph g(vertices);
  for (std::uint64_t e = 0; e < edges; ++e) {
    const std::size_t number = static_cast<std::size_t>(e) + 2;
    if (!std::getline(in, line)) bad_line(number, "missing edge line");
    std::istringstream tokens(line);
    std::string u;
    std::string v;
    std::string w;
    if (!(tokens >> u >> v >> w)) bad_line(number, "expected 'u v w'");
    try {
      g.add_edge(parse_u64(u, number), parse_u64(v, number), parse_double(w, number));
    } catch (const InvalidArgument& err) {
      bad_line(number, err.what());
    }
  }
  return g;
}

void write_items(std::ostream& out, const std::vector<DataItem>& items) {
  for (const DataItem& item : items) {
    std::string line;
    if (const auto* s = item.get_if<IdSet>()) {
      for (const auto id : s->ids) line += (line.empty() ? "" : " ") + std::to_string(id);
    } else if (const auto* c = item.get_if<CountMap>()) {
      for (const auto& [id, n] : c->entries) {
        line += (line.empty() ? "" : " ") + std::to_string(id) + ":" + std::to_string(n);
      }
    } else if (const auto* v = item.get_if<DenseVector>()) {
      for (const double x : v->values) line += (line.empty() ? "" : " ") + format_double(x);
    } else if (const auto* vid = item.get_if<VertexId>()) {
      line = std::to_string(vid->vertex);
    } else {
      throw InvalidArgument("item pairs have no text corpus format");
    }
    out << line << '\n';
  }
}

void write_graph(std::ostream& out, const Graph& graph) {
  out << graph.vertex_count() << ' ' << graph.edges().size() << '\n';
  for (const Edge& e : graph.edges()) out << e.u << ' ' << e.v << ' ' << format_double(e.weight) << '\n';
}

void write_ground_truth(std::ostream& out, const PlantedDataset& data) {
  for (std::size_t q = 0; q < data.queries.size(); ++q) {
    out << q << ' ' << data.neighbors[q] << ' ' << format_double(data.query_gaps.at(q)) << '\n';
  }
}

}  // namespace rewa::io
