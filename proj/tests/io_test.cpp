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

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "generators.hpp"
#include "rewa/errors.hpp"

namespace rewa {
namespace {

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(TextIo, IdSetRoundTrip) {
  testing::Gen gen(50);
  std::vector<DataItem> items;
  for (int i = 0; i < 40; ++i) items.emplace_back(gen.id_set(1000, 20));
  std::stringstream s;
  io::write_items(s, items);
  const auto back = io::read_id_sets(s);
  ASSERT_EQ(back.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) EXPECT_EQ(back[i].get_if<IdSet>()->ids, items[i].get_if<IdSet>()->ids);
}

TEST(TextIo, CountMapRoundTrip) {
  testing::Gen gen(51);
  std::vector<DataItem> items;
  for (int i = 0; i < 40; ++i) items.emplace_back(gen.count_map(500, 20, 1000));
  std::stringstream s;
  io::write_items(s, items);
  const auto back = io::read_count_maps(s);
  ASSERT_EQ(back.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(back[i].get_if<CountMap>()->entries, items[i].get_if<CountMap>()->entries);
  }
}

TEST(TextIo, VectorRoundTripIsExact) {
  testing::Gen gen(52);
  std::vector<DataItem> items;
  for (int i = 0; i < 40; ++i) items.emplace_back(gen.vector(7));
  std::stringstream s;
  io::write_items(s, items);
  const auto back = io::read_vectors(s);
  ASSERT_EQ(back.size(), items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    EXPECT_EQ(back[i].get_if<DenseVector>()->values, items[i].get_if<DenseVector>()->values);
  }
}

TEST(TextIo, GraphRoundTrip) {
  testing::Gen gen(53);
  const Graph g = gen.graph(20, 40);
  std::stringstream s;
  io::write_graph(s, g);
  const Graph back = io::read_graph(s);
  EXPECT_EQ(back.fingerprint(), g.fingerprint());
  EXPECT_EQ(back.shortest_paths(3), g.shortest_paths(3));
}

TEST(TextIo, EmptyLineIsEmptySet) {
  std::istringstream in("1 2 3\n\n4\n");
  const auto items = io::read_id_sets(in);
  ASSERT_EQ(items.size(), 3U);
  EXPECT_TRUE(items[1].get_if<IdSet>()->ids.empty());
}

TEST(TextIo, ErrorsNameTheLine) {
  EXPECT_EQ(error_of([] {
              std::istringstream in("1 2\n3 x\n");
              (void)io::read_id_sets(in);
            }).rfind("line 2:", 0),
            0U);
  EXPECT_EQ(error_of([] {
              std::istringstream in("1:2\n\n5:0\n");
              (void)io::read_count_maps(in);
            }).rfind("line 3:", 0),
            0U);
  EXPECT_EQ(error_of([] {
              std::istringstream in("1:2 7\n");
              (void)io::read_count_maps(in);
            }).rfind("line 1:", 0),
            0U);
  EXPECT_EQ(error_of([] {
              std::istringstream in("0.1 0.2\n0.3\n");
              (void)io::read_vectors(in);
            }).rfind("line 2:", 0),
            0U);
  EXPECT_EQ(error_of([] {
              std::istringstream in("3 2\n0 1 1.5\n0 9 1\n");
              (void)io::read_graph(in);
            }).rfind("line 3:", 0),
            0U);
  EXPECT_EQ(error_of([] {
              std::istringstream in("3 2\n0 1 1.5\n");
              (void)io::read_graph(in);
            }).rfind("line 3:", 0),
            0U);
  EXPECT_EQ(error_of([] {
              std::istringstream in("3 1\n0 1 -1\n");
              (void)io::read_graph(in);
            }).rfind("line 2:", 0),
            0U);
}

TEST(TextIo, GroundTruth) {
  PlantedDataset d;
  d.queries = {IdSet{{1}}, IdSet{{2}}};
  d.neighbors = {5, 9};
  d.query_gaps = {3.0, 0.5};
  std::ostringstream out;
  io::write_ground_truth(out, d);
  EXPECT_EQ(out.str(), "0 5 3\n1 9 0.5\n");
}

}  // namespace
}  // namespace rewa
