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

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipeshard/graph.hpp"

namespace pipeshard {

struct HardwareProfile;  // costmodel.hpp

/// Half-open node-id interval [lb, ub).
struct NodeRange {
  NodeId lb = 0;
  NodeId ub = 0;

  std::uint64_t size() const { return ub - lb; }
  bool contains(NodeId v) const { return v >= lb && v < ub; }
  friend bool operator==(const NodeRange&, const NodeRange&) = default;
};

/// Edge-balanced chunking of the node space: GPU g processes the target
/// nodes in chunk_ranges[g]. split_points are the chunk upper bounds for
/// GPUs 0..num_gpus-2; they may reach num_nodes when trailing chunks are
/// empty (more GPUs than nodes can absorb).
struct WorkloadSplit {
  std::uint32_t num_gpus = 1;
  std::uint64_t num_nodes = 0;
  std::vector<NodeId> split_points;       // length num_gpus - 1
  std::vector<NodeRange> chunk_ranges;    // length num_gpus

  std::uint64_t chunk_edges(const CsrGraph& g, std::uint32_t gpu) const {
    const NodeRange& r = chunk_ranges[gpu];
    return g.row_ptr[r.ub] - g.row_ptr[r.lb];
  }
};

enum class PlacementMode { equal_nodes, follow_split };

/// Where each node's embedding row lives: GPU g owns ranges[g]. Embedding
/// indices are rebased to zero within each shard, so a global id maps to
/// (owner gpu, offset inside the shard).
struct NePlacement {
  PlacementMode mode = PlacementMode::equal_nodes;
  std::uint32_t num_gpus = 1;
  std::uint64_t num_nodes = 0;
  std::uint64_t dim = 1;                 // embedding width D
  std::vector<NodeRange> ranges;         // length num_gpus, tiles [0, N)
};

struct GpuFootprint {
  std::uint64_t ne_bytes = 0;  // embedding shard, shared address space
  std::uint64_t gp_bytes = 0;  // graph structure chunk, private memory
  std::uint64_t total() const { return ne_bytes + gp_bytes; }
};

struct FootprintReport {
  std::vector<GpuFootprint> per_gpu;
  std::uint64_t device_mem_bytes = 0;
  bool fits = false;

  std::uint64_t total_ne_bytes() const {
    std::uint64_t t = 0;
    for (const auto& f : per_gpu) t += f.ne_bytes;
    return t;
  }
};

struct Owner {
  std::uint32_t gpu = 0;
  std::uint64_t offset = 0;
  friend bool operator==(const Owner&, const Owner&) = default;
};

/// Splits the graph into num_gpus chunks balanced by edge count. Each split
/// point is the smallest node id past the previous one whose row_ptr value
/// reaches the next ceil(E/n)-sized helping of edges, located by binary
/// search on the monotone row_ptr array.
WorkloadSplit split_by_edges(const CsrGraph& g, std::uint32_t num_gpus);

/// equal_nodes: GPU g owns [g*ceil(N/n), (g+1)*ceil(N/n)) clamped to N.
/// follow_split: shard boundaries copy the workload split (pass it in).
NePlacement plan_ne_placement(const CsrGraph& g, std::uint32_t num_gpus,
                              PlacementMode mode, std::uint64_t dim,
                              const WorkloadSplit* split = nullptr);

/// Global node id -> (owner gpu, offset inside that shard).
Owner translate(const NePlacement& p, NodeId global_id);

/// Per-GPU bytes: embedding shard at dim * 4 bytes per node, graph chunk at
/// 8 bytes per row_ptr slot and per neighbor entry.
FootprintReport memory_footprint(const CsrGraph& g, const NePlacement& p,
                                 const WorkloadSplit& split,
                                 const HardwareProfile& hw);

void to_json(nlohmann::json& j, const NodeRange& r);
void from_json(const nlohmann::json& j, NodeRange& r);
void to_json(nlohmann::json& j, const WorkloadSplit& s);
void from_json(const nlohmann::json& j, WorkloadSplit& s);
void to_json(nlohmann::json& j, const NePlacement& p);
void from_json(const nlohmann::json& j, NePlacement& p);

}  // namespace pipeshard
