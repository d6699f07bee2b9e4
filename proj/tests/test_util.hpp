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

#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "pipeshard/graph.hpp"
#include "pipeshard/placement.hpp"
#include "pipeshard/rng.hpp"

namespace pipeshard::test {

/// Independent oracle for the edge-balanced splitter: a plain left-to-right
/// scan applying the same rule the binary search is specified to implement.
inline std::vector<NodeId> linear_scan_split_points(const CsrGraph& g,
                                                    std::uint32_t num_gpus) {
  const std::uint64_t e_per_gpu =
      (g.num_edges() + num_gpus - 1) / num_gpus;
  std::vector<NodeId> points;
  NodeId last_pos = 0;
  for (std::uint32_t i = 0; i + 1 < num_gpus; ++i) {
    NodeId nid = g.num_nodes;
    if (last_pos < g.num_nodes) {
      const EdgeOffset target =
          std::min(g.row_ptr[last_pos] + e_per_gpu, g.num_edges());
      for (NodeId cand = last_pos + 1; cand <= g.num_nodes; ++cand) {
        if (g.row_ptr[cand] >= target) {
          nid = cand;
          break;
        }
      }
    }
    points.push_back(nid);
    last_pos = nid;
  }
  return points;
}

/// Random graph with up to max_nodes nodes; may be empty, have isolated
/// nodes, duplicate edges and self loops.
inline CsrGraph random_graph(Rng& rng, std::uint64_t max_nodes = 200,
                             double max_avg_degree = 8.0) {
  const std::uint64_t n = 1 + rng.next_below(max_nodes);
  const std::uint64_t max_edges = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(static_cast<double>(n) * max_avg_degree));
  const std::uint64_t m = rng.next_below(max_edges + 1);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i)
    edges.emplace_back(rng.next_below(n), rng.next_below(n));
  return from_edges(n, edges);
}

/// All (target, neighbor) pairs of a CSR, sorted, for multiset comparisons.
inline std::vector<std::pair<NodeId, NodeId>> edge_multiset(const CsrGraph& g,
                                                            NodeId base = 0) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId v = 0; v < g.num_nodes; ++v)
    for (NodeId nb : g.neighbors(v)) out.emplace_back(base + v, nb);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pipeshard::test
