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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace pipeshard {

/// Abstract per-operation cycle costs. The defaults are calibrated on a
/// remote-heavy reference workload (power-law graph, four GPUs, 16-neighbor
/// partitions, dim 16, ~3:1 remote:local edges) so that remote access takes
/// roughly 60% of the unoverlapped time and local access plus aggregation
/// the other 40%, which is where profiled multi-GPU aggregation sits.
struct LatencyModel {
  std::uint64_t remote_get_base = 384;
  std::uint64_t local_load_base = 128;
  std::uint64_t per_elem_remote = 1;
  std::uint64_t per_elem_local = 1;
  std::uint64_t per_elem_compute = 1;
};

struct HardwareProfile {
  std::string name = "a100";
  std::uint32_t num_sms = 108;
  std::uint32_t max_warps_per_sm = 64;
  std::uint64_t smem_per_sm_bytes = 164 * 1024;
  std::uint64_t device_mem_bytes = 40ull << 30;
  std::uint64_t page_bytes = 4096;      // paged-remote baseline granularity
  std::uint64_t barrier_cycles = 64;    // end-of-aggregation sync cost
  LatencyModel lat;
};

/// The tunable kernel triple. Legal ranges: ps in [1,32], dist in [1,16],
/// wpb in [1,16].
struct KernelConfig {
  std::uint32_t ps = 1;    // neighbors per partition
  std::uint32_t dist = 1;  // interleaving distance
  std::uint32_t wpb = 1;   // warps per block

  friend bool operator==(const KernelConfig&, const KernelConfig&) = default;
};

struct LaunchGeometry {
  std::uint64_t num_warps = 0;
  std::uint64_t num_blocks = 0;
  double blocks_per_sm = 0.0;
};

struct Violation {
  std::string constraint;  // "ps range", "dist range", "wpb range", "smem", ...
  std::string detail;
};

inline constexpr std::uint32_t kMaxPs = 32;
inline constexpr std::uint32_t kMaxDist = 16;
inline constexpr std::uint32_t kMaxWpb = 16;

/// Workload per warp: 2 * ps * D * dist elements.
std::uint64_t wpw(const KernelConfig& cfg, std::uint64_t dim);

/// Shared memory per block: ps*wpb*4 bytes of neighbor ids plus 2*wpb*D*4
/// bytes for partial results and remotely fetched embeddings.
std::uint64_t smem(const KernelConfig& cfg, std::uint64_t dim);

/// numWarps = ceil(max(local, remote)/dist), numBlocks = ceil(numWarps/wpb),
/// blocksPerSM = numBlocks / numSMs.
LaunchGeometry launch_geometry(std::uint64_t n_local_parts,
                               std::uint64_t n_remote_parts,
                               const KernelConfig& cfg,
                               const HardwareProfile& hw);

/// Empty result means the config is admissible on this hardware.
std::vector<Violation> validate(const KernelConfig& cfg,
                                const HardwareProfile& hw, std::uint64_t dim);

/// Shipped presets: "a100", "v100", and "desk" (a small modeled GPU for
/// desk-scale experiments). Throws ConfigError for unknown names.
HardwareProfile builtin_profile(const std::string& name);

HardwareProfile load_profile(const std::string& path);

/// Resolution order: exact file path, then $PIPESHARD_PROFILE_DIR/<name>.json
/// (or profile_dir when non-empty), then built-in presets.
HardwareProfile resolve_profile(const std::string& name_or_path,
                                const std::string& profile_dir = "");

void to_json(nlohmann::json& j, const HardwareProfile& hw);
void from_json(const nlohmann::json& j, HardwareProfile& hw);
void to_json(nlohmann::json& j, const KernelConfig& cfg);
void from_json(const nlohmann::json& j, KernelConfig& cfg);

}  // namespace pipeshard
