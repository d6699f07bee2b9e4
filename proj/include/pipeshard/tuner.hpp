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
#include <functional>
#include <string>
#include <vector>

#include "pipeshard/costmodel.hpp"

namespace pipeshard {

/// Measures one configuration and returns its latency in cycles. Must be
/// deterministic; typically wraps multi_gpu_run over a fixed workload.
using SimulateFn = std::function<std::uint64_t(const KernelConfig&)>;

struct TuneEntry {
  KernelConfig cfg;
  std::uint64_t cycles = 0;
};

struct TuneTrace {
  std::vector<TuneEntry> entries;  // in evaluation order, each one simulated
  KernelConfig best;
  std::uint64_t best_cycles = 0;

  std::size_t iterations() const { return entries.size(); }
};

/// When the wpb ascent has to retreat ps, pick its second-best value by
/// measured latency (default) or the numerically second-largest value tried.
enum class RetreatRule : std::uint8_t { latency_rank, value_rank };

struct TuneOptions {
  std::vector<std::uint32_t> ps_steps = {1, 2, 4, 8, 16, 32};
  std::vector<std::uint32_t> dist_steps = {1, 2, 4, 8, 16};
  std::vector<std::uint32_t> wpb_steps = {1, 2, 4, 8, 16};
  std::size_t max_evaluations = 15;
  RetreatRule retreat = RetreatRule::latency_rank;
};

/// Greedy coordinate ascent over (ps, dist, wpb), in that order, starting at
/// (1,1,1): each parameter climbs its step schedule while latency strictly
/// improves. If growing wpb ever hurts, ps retreats to its second-best value
/// and the wpb climb restarts once. Stops early when the last three
/// measurements all fall behind the third-best latency seen, or at the
/// evaluation budget. Only configurations that pass validate() are measured,
/// and the returned best always passes.
TuneTrace optimize(const SimulateFn& simulate, const HardwareProfile& hw,
                   std::uint64_t dim, const TuneOptions& opts = {});

struct ExhaustiveResult {
  std::vector<TuneEntry> table;  // sorted by cycles, ties by (ps, dist, wpb)
  KernelConfig best;
  std::uint64_t best_cycles = 0;
};

/// Evaluates every validate-passing point of the grid (cartesian product of
/// the step vectors; at most 1024 points). Throws ConfigError if no point is
/// valid.
ExhaustiveResult exhaustive(const SimulateFn& simulate,
                            const HardwareProfile& hw, std::uint64_t dim,
                            const TuneOptions& grid = {});

/// CSV with header "ps,dist,wpb,cycles,rank"; rank 1 is the lowest latency.
std::string trace_to_csv(const TuneTrace& trace);

}  // namespace pipeshard
