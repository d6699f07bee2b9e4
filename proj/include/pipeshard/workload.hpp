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

#include "pipeshard/costmodel.hpp"
#include "pipeshard/graph.hpp"
#include "pipeshard/placement.hpp"

namespace pipeshard {

enum class PartKind : std::uint8_t { local, remote };

/// One GPU's share of the aggregation workload, split by where each
/// neighbor's embedding lives. Rows of both CSRs are the chunk's target
/// nodes (row r is global node first_target + r); col_idx keeps global ids.
struct LocalRemoteSplit {
  std::uint32_t gpu_id = 0;
  NodeId first_target = 0;
  CsrGraph local_csr;
  CsrGraph remote_csr;
};

/// A fixed-size slice of one target node's neighbor list; the unit of warp
/// work. All neighbors in a partition share one kind.
struct NeighborPartition {
  NodeId target = 0;
  PartKind kind = PartKind::local;
  std::vector<NodeId> neighbors;  // 1..ps global ids

  std::uint64_t size() const { return neighbors.size(); }
};

struct WarpTask {
  PartKind kind;
  std::uint32_t index;  // into the plan's local_parts or remote_parts

  friend bool operator==(const WarpTask&, const WarpTask&) = default;
};

struct WarpWorkload {
  std::uint32_t warp_id = 0;
  std::vector<WarpTask> tasks;  // local group first, then remote group
};

struct BlockAssignment {
  std::uint32_t first_warp = 0;
  std::uint32_t warp_count = 0;
};

/// Everything the simulator needs to replay one GPU's kernel.
struct KernelLaunchPlan {
  KernelConfig cfg;
  std::uint64_t dim = 1;
  std::vector<NeighborPartition> local_parts;
  std::vector<NeighborPartition> remote_parts;
  std::vector<WarpWorkload> warps;
  std::vector<BlockAssignment> blocks;
  std::uint64_t smem_bytes_per_block = 0;
};

/// How neighbor lists become warp tasks when building a plan.
enum class MappingMode : std::uint8_t { interleaved, segregated };
enum class Granularity : std::uint8_t { partitioned, whole_list };

/// Partitions every target node's neighbor list by embedding owner:
/// neighbors owned by gpu_id stay in local_csr, the rest go to remote_csr.
/// Edge multiplicity and per-row order are preserved.
LocalRemoteSplit split_local_remote(const CsrGraph& g,
                                    const WorkloadSplit& split,
                                    const NePlacement& placement,
                                    std::uint32_t gpu_id);

/// Slices each row of csr into partitions of at most ps neighbors, node
/// order then neighbor order; only the last slice of a row may be short.
std::vector<NeighborPartition> partition_neighbors(const CsrGraph& csr,
                                                   NodeId first_target,
                                                   PartKind kind,
                                                   std::uint32_t ps);

/// Warp k owns local partitions [k*dist, (k+1)*dist) and remote partitions
/// [k*dist, (k+1)*dist); whichever list is longer determines the warp count
/// ceil(max(nL,nR)/dist). Trailing surplus groups become single-kind warps.
std::vector<WarpWorkload> interleave(
    const std::vector<NeighborPartition>& local_parts,
    const std::vector<NeighborPartition>& remote_parts, std::uint32_t dist);

/// All local-group warps first, then all remote-group warps; used by the
/// no-interleave baseline.
std::vector<WarpWorkload> map_segregated(
    const std::vector<NeighborPartition>& local_parts,
    const std::vector<NeighborPartition>& remote_parts, std::uint32_t dist);

/// Groups consecutive warps wpb at a time into blocks and attaches the
/// shared-memory footprint.
KernelLaunchPlan map_to_blocks(std::vector<NeighborPartition> local_parts,
                               std::vector<NeighborPartition> remote_parts,
                               std::vector<WarpWorkload> warps,
                               const KernelConfig& cfg, std::uint64_t dim);

/// split -> partition -> interleave -> blocks, with the granularity and
/// mapping knobs the ablation baselines need.
KernelLaunchPlan build_launch_plan(
    const LocalRemoteSplit& lr, const KernelConfig& cfg, std::uint64_t dim,
    MappingMode mapping = MappingMode::interleaved,
    Granularity granularity = Granularity::partitioned);

/// Throws IntegrityError if any warp references a missing partition, a
/// partition is assigned twice, or one is dropped.
void validate_plan(const KernelLaunchPlan& plan);

void to_json(nlohmann::json& j, const KernelLaunchPlan& plan);
void from_json(const nlohmann::json& j, KernelLaunchPlan& plan);

}  // namespace pipeshard
