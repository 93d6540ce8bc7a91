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

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rewa {

struct Edge {
  std::uint64_t u;
  std::uint64_t v;
  double weight;
};

// Undirected graph with non-negative edge weights.
class Graph {
 public:
  explicit Graph(std::uint64_t vertex_count);

  // Throws InvalidArgument for an unknown endpoint or a negative / non-finite weight.
  void add_edge(std::uint64_t u, std::uint64_t v, double weight);

  [[nodiscard]] std::uint64_t vertex_count() const noexcept { return adjacency_.size(); }
  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

  struct Arc {
    std::uint64_t to;
    double weight;
  };
  [[nodiscard]] const std::vector<Arc>& neighbors(std::uint64_t v) const { return adjacency_.at(v); }

  // Dijkstra from `source`; unreachable vertices get +inf.
  [[nodiscard]] std::vector<double> shortest_paths(std::uint64_t source) const;

  [[nodiscard]] std::uint64_t fingerprint() const noexcept;

 private:
  std::vector<std::vector<Arc>> adjacency_;
  std::vector<Edge> edges_;
};

}  // namespace rewa
