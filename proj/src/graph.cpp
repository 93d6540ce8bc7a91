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

#include "rewa/graph.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

#include "rewa/errors.hpp"
#include "rewa/hashing.hpp"

namespace rewa {

Graph::Graph(std::uint64_t vertex_count) : adjacency_(vertex_count) {}

void Graph::add_edge(std::uint64_t u, std::uint64_t v, double weight) {
  if (u >= vertex_count() || v >= vertex_count()) {
    throw InvalidArgument("edge endpoint out of range: " + std::to_string(u) + "-" + std::to_string(v));
  }
  if (!std::isfinite(weight) || weight < 0.0) throw InvalidArgument("edge weights must be finite and non-negative");
  adjacency_[u].push_back({v, weight});
  if (u != v) adjacency_[v].push_back({u, weight});
  edges_.push_back({u, v, weight});
}

std::vector<double> Graph::shortest_paths(std::uint64_t source) const {
  if (source >= vertex_count()) throw InvalidArgument("source vertex out of range");
  std::vector<double> dist(vertex_count(), std::numeric_limits<double>::infinity());
  using Entry = std::pair<double, std::uint64_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  dist[source] = 0.0;
  frontier.emplace(0.0, source);
  while (!frontier.empty()) {
    const auto [d, v] = frontier.top();
    frontier.pop();
    if (d > dist[v]) continue;
    for (const Arc& a : adjacency_[v]) {
      const double nd = d + a.weight;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        frontier.emplace(nd, a.to);
      }
    }
  }
  return dist;
}

std::uint64_t Graph::fingerprint() const noexcept {
  std::uint64_t h = mix64(vertex_count() + 0x51ed2701f3a5c7b9ULL);
  for (const Edge& e : edges_) {
    h = mix64(h ^ e.u);
    h = mix64(h ^ e.v);
    h = mix64(h ^ std::bit_cast<std::uint64_t>(e.weight));
  }
  return h;
}

}  // namespace rewa
