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

// Plain-text corpus formats. ASCII, LF line endings, item i is line i.
//   id sets      whitespace-separated unsigned ids
//   count maps   whitespace-separated id:count pairs
//   vectors      whitespace-separated decimals, d per line
//   graph        "V E" then E lines "u v w"
//   ground truth "query neighbor gap" per line

#include <istream>
#include <ostream>
#include <vector>

#include "rewa/datagen.hpp"
#include "rewa/graph.hpp"
#include "rewa/witness.hpp"

namespace rewa::io {

// Readers throw InvalidArgument naming the offending line.
[[nodiscard]] std::vector<DataItem> read_id_sets(std::istream& in);
[[nodiscard]] std::vector<DataItem> read_count_maps(std::istream& in);
[[nodiscard]] std::vector<DataItem> read_vectors(std::istream& in);
[[nodiscard]] Graph read_graph(std::istream& in);

// Writes each item on its own line in the format matching its kind.
void write_items(std::ostream& out, const std::vector<DataItem>& items);
void write_graph(std::ostream& out, const Graph& graph);
void write_ground_truth(std::ostream& out, const PlantedDataset& data);

}  // namespace rewa::io
