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

#include "pipeshard/costmodel.hpp"
#include "pipeshard/workload.hpp"

namespace pipeshard {

/// Pipeline stages: loading remote neighbors, loading local neighbors,
/// aggregation compute.
enum class Stage : std::uint8_t { LR, LL, AC };

enum class RemoteMode : std::uint8_t { sync, async };
enum class Transport : std::uint8_t { fine_grained, paged };

/// One choice per axis. mapping and granularity take effect when a plan is
/// built (build_launch_plan); remote and transport drive execution.
struct ScheduleMode {
  RemoteMode remote = RemoteMode::async;
  MappingMode mapping = MappingMode::interleaved;
  Granularity granularity = Granularity::partitioned;
  Transport transport = Transport::fine_grained;
};

struct TraceEvent {
  std::uint64_t cycle;
  std::uint32_t sm;
  std::uint32_t warp;
  Stage stage;
  bool begin;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct StageBusy {
  std::uint64_t lr = 0;
  std::uint64_t ll = 0;
  std::uint64_t ac = 0;
};

struct SimReport {
  std::uint64_t total_cycles = 0;
  double achieved_occupancy = 0.0;  // ready-or-running warps per slot-cycle
  double sm_utilization = 0.0;      // issuing cycles per active-SM cycle
  StageBusy busy;
  std::uint64_t remote_bytes = 0;   // modeled transfer volume
  std::uint32_t num_warps = 0;
  std::uint32_t num_blocks = 0;
  std::uint32_t active_sms = 0;
  std::vector<TraceEvent> trace;    // only when capture_trace

  // Raw accounting the ratios were derived from; kept so that reports from
  // multiple passes/GPUs can be merged without losing precision.
  std::uint64_t occupancy_num = 0;
  std::uint64_t occupancy_den = 0;
  std::uint64_t issue_cycles = 0;
};

/// Event-driven execution of a launch plan.
///
/// Model: each SM runs one warp operation at a time and, when it frees,
/// picks the lowest-id resident warp that has an operation ready. Local
/// loads and aggregation occupy the SM for their full cost; a remote get
/// occupies a single issue cycle and its latency then elapses off-SM. In
/// sync mode the issuing warp stalls until the data lands before its
/// aggregation; in async mode it keeps working through the paired local
/// partition and only stalls at the aggregation that needs the data. Blocks
/// are dispatched in order to the SM with the most free warp slots (ties:
/// free shared memory, then lowest id) and never migrate.
SimReport simulate(const KernelLaunchPlan& plan, const HardwareProfile& hw,
                   std::uint64_t dim, const ScheduleMode& mode,
                   bool capture_trace = false);

/// Schedule transformation with a global barrier between communication and
/// compute: every remote fetch completes (pass 1) before any local load or
/// aggregation starts (pass 2).
SimReport simulate_phase_separated(const KernelLaunchPlan& plan,
                                   const HardwareProfile& hw,
                                   std::uint64_t dim, const ScheduleMode& mode,
                                   bool capture_trace = false);

enum class BaselineKind : std::uint8_t {
  no_np,            // whole neighbor lists, no fixed-size partitioning
  no_interleave,    // local warps first, then remote warps
  phase_separated,  // all communication before any compute
  paged_remote      // page-granular remote transfers
};

SimReport simulate_baseline(const LocalRemoteSplit& lr,
                            const HardwareProfile& hw, std::uint64_t dim,
                            const KernelConfig& cfg, BaselineKind kind,
                            bool capture_trace = false);

struct MultiGpuReport {
  std::vector<SimReport> per_gpu;
  std::uint64_t max_gpu_cycles = 0;
  std::uint64_t barrier_cycles = 0;
  std::uint64_t total_cycles = 0;  // max over GPUs + barrier
  std::uint64_t remote_bytes = 0;
  double mean_occupancy = 0.0;
  double mean_utilization = 0.0;
};

/// Full pipeline for every GPU: edge split, embedding placement, local/
/// remote split, plan build, simulate. Aggregate latency is the slowest GPU
/// plus the end-of-aggregation barrier.
MultiGpuReport multi_gpu_run(const CsrGraph& g, std::uint32_t num_gpus,
                             const KernelConfig& cfg,
                             const HardwareProfile& hw, std::uint64_t dim,
                             const ScheduleMode& mode,
                             PlacementMode placement = PlacementMode::follow_split,
                             bool capture_trace = false);

/// Bytes one remote partition moves under a transport. Paged transfers fault
/// each embedding separately, so every neighbor rounds up to whole pages.
std::uint64_t remote_partition_bytes(std::uint64_t part_size,
                                     std::uint64_t dim, Transport transport,
                                     std::uint64_t page_bytes);

/// CSV with header "cycle,sm,warp,stage,event".
std::string trace_to_csv(const SimReport& report);

nlohmann::json report_to_json(const SimReport& report);
nlohmann::json report_to_json(const MultiGpuReport& report);

}  // namespace pipeshard
