/*
 * Copyright (c) 2026, pipeshard contributors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pipeshard/costmodel.hpp"
#include "pipeshard/errors.hpp"
#include "pipeshard/placement.hpp"
#include "test_util.hpp"

using namespace pipeshard;

namespace {

/// Graph with the requested out-degrees (neighbors all point at node 0).
CsrGraph graph_with_degrees(const std::vector<std::uint64_t>& degrees) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < degrees.size(); ++v)
    for (std::uint64_t k = 0; k < degrees[v]; ++k) edges.emplace_back(v, 0);
  return from_edges(degrees.size(), edges);
}

}  // namespace

TEST_CASE("split_by_edges uniform degrees") {
  CsrGraph g = graph_with_degrees({2, 2, 2, 2});  // row_ptr 0,2,4,6,8
  WorkloadSplit s = split_by_edges(g, 2);
  CHECK(s.split_points == std::vector<NodeId>{2});
  CHECK(s.chunk_edges(g, 0) == 4);
  CHECK(s.chunk_edges(g, 1) == 4);
}

TEST_CASE("split_by_edges skewed degrees") {
  CsrGraph g = graph_with_degrees({5, 1, 1, 1});  // row_ptr 0,5,6,7,8
  WorkloadSplit s = split_by_edges(g, 2);
  // ePerGPU = 4, target = 4, smallest nid with row_ptr[nid] >= 4 is 1
  CHECK(s.split_points == std::vector<NodeId>{1});
  CHECK(s.chunk_edges(g, 0) == 5);
  CHECK(s.chunk_edges(g, 1) == 3);
}

TEST_CASE("split_by_edges single gpu has no split points") {
  CsrGraph g = graph_with_degrees({3, 3, 2});
  WorkloadSplit s = split_by_edges(g, 1);
  CHECK(s.split_points.empty());
  CHECK(s.chunk_ranges == std::vector<NodeRange>{{0, 3}});
}

TEST_CASE("split_by_edges zero gpus rejected") {
  CsrGraph g = graph_with_degrees({1});
  CHECK_THROWS_AS(split_by_edges(g, 0), InputError);
}

TEST_CASE("split_by_edges more gpus than nodes yields empty chunks") {
  CsrGraph g = graph_with_degrees({4, 4});
  WorkloadSplit s = split_by_edges(g, 5);
  CHECK(s.chunk_ranges.size() == 5);
  std::uint64_t covered = 0;
  for (const NodeRange& r : s.chunk_ranges) {
    CHECK(r.lb <= r.ub);
    covered += r.size();
  }
  CHECK(covered == g.num_nodes);
}

TEST_CASE("split_by_edges matches the linear-scan oracle") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    CsrGraph g = test::random_graph(rng);
    const std::uint32_t gpus = 1 + static_cast<std::uint32_t>(rng.next_below(8));
    WorkloadSplit s = split_by_edges(g, gpus);
    CHECK(s.split_points == test::linear_scan_split_points(g, gpus));

    // Chunk ranges tile [0, N).
    NodeId expect_lb = 0;
    for (const NodeRange& r : s.chunk_ranges) {
      CHECK(r.lb == expect_lb);
      expect_lb = r.ub;
    }
    CHECK(expect_lb == g.num_nodes);

    // No chunk overshoots its ideal share by more than one node's worth.
    const std::uint64_t ideal = (g.num_edges() + gpus - 1) / gpus;
    const std::uint64_t max_deg = g.max_degree();
    for (std::uint32_t gpu = 0; gpu < gpus; ++gpu)
      CHECK(s.chunk_edges(g, gpu) <= ideal + max_deg);
  }
}

TEST_CASE("plan_ne_placement equal nodes") {
  CsrGraph g = from_edges(10, {});
  NePlacement p = plan_ne_placement(g, 4, PlacementMode::equal_nodes, 8);
  CHECK(p.ranges == std::vector<NodeRange>{{0, 3}, {3, 6}, {6, 9}, {9, 10}});
}

TEST_CASE("plan_ne_placement single gpu") {
  CsrGraph g = from_edges(7, {});
  NePlacement p = plan_ne_placement(g, 1, PlacementMode::equal_nodes, 4);
  CHECK(p.ranges == std::vector<NodeRange>{{0, 7}});
}

TEST_CASE("plan_ne_placement follow split") {
  CsrGraph g = graph_with_degrees({5, 1, 1, 1});
  WorkloadSplit s = split_by_edges(g, 2);
  NePlacement p =
      plan_ne_placement(g, 2, PlacementMode::follow_split, 4, &s);
  CHECK(p.ranges == std::vector<NodeRange>{{0, 1}, {1, 4}});
  CHECK_THROWS_AS(plan_ne_placement(g, 2, PlacementMode::follow_split, 4),
                  InputError);
}

TEST_CASE("translate hand examples") {
  CsrGraph g = from_edges(6, {});
  NePlacement p = plan_ne_placement(g, 2, PlacementMode::equal_nodes, 4);
  // ranges [0,3),[3,6)
  CHECK(translate(p, 4) == Owner{1, 1});
  CHECK(translate(p, 0) == Owner{0, 0});

  CsrGraph h = graph_with_degrees({5, 1, 1, 1});
  WorkloadSplit s = split_by_edges(h, 2);
  NePlacement q = plan_ne_placement(h, 2, PlacementMode::follow_split, 4, &s);
  CHECK(translate(q, 3) == Owner{1, 2});

  CHECK_THROWS_AS(translate(p, 6), InputError);
}

TEST_CASE("translate is a bijection over [0, N)") {
  Rng rng(33);
  for (int i = 0; i < 50; ++i) {
    CsrGraph g = test::random_graph(rng);
    const std::uint32_t gpus = 1 + static_cast<std::uint32_t>(rng.next_below(6));
    WorkloadSplit s = split_by_edges(g, gpus);
    const bool follow = rng.next_below(2) == 0;
    NePlacement p = plan_ne_placement(
        g, gpus,
        follow ? PlacementMode::follow_split : PlacementMode::equal_nodes, 4,
        &s);
    std::vector<std::uint64_t> seen_per_gpu(gpus, 0);
    for (NodeId v = 0; v < g.num_nodes; ++v) {
      Owner o = translate(p, v);
      REQUIRE(o.gpu < gpus);
      CHECK(p.ranges[o.gpu].lb + o.offset == v);  // round trip
      CHECK(o.offset < p.ranges[o.gpu].size());
      ++seen_per_gpu[o.gpu];
    }
    for (std::uint32_t gpu = 0; gpu < gpus; ++gpu)
      CHECK(seen_per_gpu[gpu] == p.ranges[gpu].size());
  }
}

TEST_CASE("memory_footprint small example") {
  CsrGraph g = from_edges(4, {});
  WorkloadSplit s = split_by_edges(g, 2);
  NePlacement p = plan_ne_placement(g, 2, PlacementMode::equal_nodes, 2);
  HardwareProfile hw = builtin_profile("a100");
  FootprintReport r = memory_footprint(g, p, s, hw);
  CHECK(r.per_gpu[0].ne_bytes == 16);  // 2 nodes * 2 dims * 4 bytes
  CHECK(r.per_gpu[1].ne_bytes == 16);
  CHECK(r.fits);
}

TEST_CASE("memory_footprint at reddit scale") {
  CsrGraph g;
  g.num_nodes = 232965;
  g.row_ptr.assign(g.num_nodes + 1, 0);
  WorkloadSplit s = split_by_edges(g, 4);
  NePlacement p = plan_ne_placement(g, 4, PlacementMode::equal_nodes, 602);
  FootprintReport r = memory_footprint(g, p, s, builtin_profile("a100"));
  CHECK(r.total_ne_bytes() == 232965ull * 602 * 4);
  CHECK(r.total_ne_bytes() > 555'000'000);  // about 561 MB of embeddings
  CHECK(r.total_ne_bytes() < 565'000'000);
}

TEST_CASE("memory_footprint zero device memory never fits") {
  CsrGraph g = from_edges(4, std::vector<std::pair<NodeId, NodeId>>{{0, 1}});
  WorkloadSplit s = split_by_edges(g, 2);
  NePlacement p = plan_ne_placement(g, 2, PlacementMode::equal_nodes, 2);
  HardwareProfile hw = builtin_profile("a100");
  hw.device_mem_bytes = 0;
  CHECK_FALSE(memory_footprint(g, p, s, hw).fits);
}

TEST_CASE("split and placement JSON round trip") {
  CsrGraph g = graph_with_degrees({3, 1, 4, 1, 5});
  WorkloadSplit s = split_by_edges(g, 3);
  nlohmann::json js = s;
  WorkloadSplit s2 = js.get<WorkloadSplit>();
  CHECK(s2.split_points == s.split_points);
  CHECK(s2.chunk_ranges == s.chunk_ranges);

  NePlacement p = plan_ne_placement(g, 3, PlacementMode::follow_split, 16, &s);
  nlohmann::json jp = p;
  NePlacement p2 = jp.get<NePlacement>();
  CHECK(p2.ranges == p.ranges);
  CHECK(p2.mode == p.mode);
  CHECK(p2.dim == p.dim);
}
