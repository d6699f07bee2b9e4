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

#include "pipeshard/sim.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <tuple>
#include <sstream>

#include "pipeshard/errors.hpp"

namespace pipeshard {

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

enum class OpKind : std::uint8_t { local_load, compute, remote_get, remote_wait };

struct Op {
  OpKind kind;
  Stage stage;
  std::uint64_t dur = 0;    // occupancy for LL/AC, latency for remote_get
  std::uint64_t bytes = 0;  // remote_get only
  bool blocking = false;    // remote_get only
};

/// How warp programs sequence their remote fetches.
enum class Discipline : std::uint8_t {
  sync_remote,   // fetch completes before the paired aggregation
  async_remote,  // fetch issued ahead of the paired local work
  comm_only,     // phase-separated pass 1: remote fetches only
  compute_only   // phase-separated pass 2: everything but the fetches
};

struct OpCosts {
  const HardwareProfile& hw;
  std::uint64_t dim;
  Transport transport;

  std::uint64_t local_load(std::uint64_t size) const {
    return hw.lat.local_load_base + size * dim * hw.lat.per_elem_local;
  }
  std::uint64_t compute(std::uint64_t size) const {
    return size * dim * hw.lat.per_elem_compute;
  }
  std::uint64_t remote_elems(std::uint64_t size) const {
    return remote_partition_bytes(size, dim, transport, hw.page_bytes) / 4;
  }
  std::uint64_t remote_get(std::uint64_t size) const {
    return hw.lat.remote_get_base + remote_elems(size) * hw.lat.per_elem_remote;
  }
};

std::vector<Op> compile_warp(const WarpWorkload& warp,
                             const KernelLaunchPlan& plan, const OpCosts& costs,
                             Discipline discipline) {
  auto part_size = [&](const WarpTask& t) -> std::uint64_t {
    const auto& parts =
        t.kind == PartKind::local ? plan.local_parts : plan.remote_parts;
    return parts[t.index].size();
  };
  auto bytes_of = [&](const WarpTask& t) {
    return remote_partition_bytes(part_size(t), costs.dim, costs.transport,
                                  costs.hw.page_bytes);
  };

  std::vector<Op> ops;
  switch (discipline) {
    case Discipline::sync_remote:
      for (const WarpTask& t : warp.tasks) {
        const std::uint64_t s = part_size(t);
        if (t.kind == PartKind::local) {
          ops.push_back({OpKind::local_load, Stage::LL, costs.local_load(s)});
          ops.push_back({OpKind::compute, Stage::AC, costs.compute(s)});
        } else {
          ops.push_back({OpKind::remote_get, Stage::LR, costs.remote_get(s),
                         bytes_of(t), true});
          ops.push_back({OpKind::compute, Stage::AC, costs.compute(s)});
        }
      }
      break;

    case Discipline::async_remote: {
      std::vector<WarpTask> locals, remotes;
      for (const WarpTask& t : warp.tasks)
        (t.kind == PartKind::local ? locals : remotes).push_back(t);
      const std::size_t pairs = std::max(locals.size(), remotes.size());
      for (std::size_t i = 0; i < pairs; ++i) {
        if (i < remotes.size()) {
          const std::uint64_t s = part_size(remotes[i]);
          ops.push_back({OpKind::remote_get, Stage::LR, costs.remote_get(s),
                         bytes_of(remotes[i]), false});
        }
        if (i < locals.size()) {
          const std::uint64_t s = part_size(locals[i]);
          ops.push_back({OpKind::local_load, Stage::LL, costs.local_load(s)});
          ops.push_back({OpKind::compute, Stage::AC, costs.compute(s)});
        }
        if (i < remotes.size()) {
          ops.push_back({OpKind::remote_wait, Stage::LR, 0});
          ops.push_back({OpKind::compute, Stage::AC,
                         costs.compute(part_size(remotes[i]))});
        }
      }
      break;
    }

    case Discipline::comm_only:
      for (const WarpTask& t : warp.tasks) {
        if (t.kind != PartKind::remote) continue;
        ops.push_back({OpKind::remote_get, Stage::LR,
                       costs.remote_get(part_size(t)), bytes_of(t), true});
      }
      break;

    case Discipline::compute_only:
      for (const WarpTask& t : warp.tasks) {
        const std::uint64_t s = part_size(t);
        if (t.kind == PartKind::local)
          ops.push_back({OpKind::local_load, Stage::LL, costs.local_load(s)});
        ops.push_back({OpKind::compute, Stage::AC, costs.compute(s)});
      }
      break;
  }
  return ops;
}

struct WarpRt {
  std::vector<Op> ops;
  std::size_t pc = 0;            // current op; ops.size() once retired
  std::uint64_t op_units = 0;    // issue cycles the current op needs
  std::uint64_t units_left = 0;
  std::uint64_t op_begin = 0;    // first issue cycle of the current op
  std::uint64_t lr_done = 0;     // completion of the outstanding remote get
  std::uint64_t arrive = 0;
  std::uint64_t end = 0;
  std::uint64_t stall_cycles = 0;  // cycles blocked on remote data
  std::uint64_t issued_units = 0;  // round-robin fairness key
  std::uint32_t block = 0;
  std::int32_t sm = -1;
  bool done = false;
};

struct BlockRt {
  std::uint32_t remaining = 0;
  std::uint64_t last_end = 0;
  std::uint32_t warp_count = 0;
  std::uint32_t first_warp = 0;
};

struct SmRt {
  std::uint32_t free_slots = 0;
  std::uint64_t free_smem = 0;
  // resident warps with an issuable op, least-served first, ties by id
  std::set<std::pair<std::uint64_t, std::uint32_t>> runnable;
  bool active = false;
  std::uint64_t first_dispatch = 0;
  std::uint64_t last_end = 0;
  std::uint64_t issue_cycles = 0;
};

/// Cycle-accurate engine: every cycle each SM issues one instruction of the
/// ready resident warp that has been served the fewest cycles so far (ties
/// to the lowest warp id), a deterministic stand-in for the round-robin warp
/// scheduler. Operations occupy as many issue cycles as their cost; a remote
/// get occupies a single cycle and its latency then runs off-SM. Idle
/// stretches are skipped by jumping to the next wake-up or release event.
class Engine {
 public:
  Engine(const KernelLaunchPlan& plan, const HardwareProfile& hw,
         const OpCosts& costs, Discipline discipline, bool capture_trace)
      : plan_(plan), hw_(hw), capture_trace_(capture_trace) {
    sms_.resize(hw.num_sms);
    for (auto& sm : sms_) {
      sm.free_slots = hw.max_warps_per_sm;
      sm.free_smem = hw.smem_per_sm_bytes;
    }

    warps_.resize(plan.warps.size());
    for (std::size_t i = 0; i < plan.warps.size(); ++i)
      warps_[i].ops = compile_warp(plan.warps[i], plan, costs, discipline);

    blocks_.resize(plan.blocks.size());
    for (std::size_t b = 0; b < plan.blocks.size(); ++b) {
      const BlockAssignment& ba = plan.blocks[b];
      blocks_[b] = {ba.warp_count, 0, ba.warp_count, ba.first_warp};
      for (std::uint32_t w = 0; w < ba.warp_count; ++w)
        warps_[ba.first_warp + w].block = static_cast<std::uint32_t>(b);
      if (ba.warp_count > hw.max_warps_per_sm ||
          plan.smem_bytes_per_block > hw.smem_per_sm_bytes)
        throw ConfigError(
            "resource deadlock: block " + std::to_string(b) +
            " can never fit an SM (" + std::to_string(ba.warp_count) +
            " warps, " + std::to_string(plan.smem_bytes_per_block) +
            " smem bytes)");
      pending_.push_back(static_cast<std::uint32_t>(b));
    }
  }

  SimReport run() {
    std::uint64_t t = 0;
    dispatch(0);
    while (finished_ < warps_.size()) {
      bool need_dispatch = false;
      while (!events_.empty() && std::get<0>(events_.top()) == t) {
        const auto [time, kind, id] = events_.top();
        events_.pop();
        if (kind == 0) {  // block resource release
          const BlockRt& blk = blocks_[id];
          SmRt& sm = sms_[warps_[blk.first_warp].sm];
          sm.free_slots += blk.warp_count;
          sm.free_smem += plan_.smem_bytes_per_block;
          need_dispatch = true;
        } else {  // warp wake-up
          WarpRt& w = warps_[id];
          if (!w.done)
            sms_[w.sm].runnable.insert(
                {w.issued_units, static_cast<std::uint32_t>(id)});
        }
      }
      if (need_dispatch) dispatch(t);

      bool issued = false;
      for (std::size_t s = 0; s < sms_.size(); ++s) {
        if (sms_[s].runnable.empty()) continue;
        issue_unit(static_cast<int>(s), t);
        issued = true;
      }
      if (finished_ == warps_.size()) break;

      if (issued) {
        ++t;
      } else if (!events_.empty()) {
        const std::uint64_t next = std::get<0>(events_.top());
        assert(next > t);
        t = next;
      } else {
        assert(pending_.empty() && "simulation stuck with work outstanding");
        break;
      }
    }
    return finalize();
  }

 private:
  /// One issue cycle for the SM's lowest-id ready warp.
  void issue_unit(int s, std::uint64_t t) {
    SmRt& sm = sms_[s];
    const std::uint32_t wi = sm.runnable.begin()->second;
    WarpRt& w = warps_[wi];
    const Op& op = w.ops[w.pc];

    if (w.units_left == w.op_units) w.op_begin = t;
    --w.units_left;
    ++sm.issue_cycles;
    sm.runnable.erase(sm.runnable.begin());
    ++w.issued_units;
    if (w.units_left > 0) {
      sm.runnable.insert({w.issued_units, wi});
      return;
    }
    sm.runnable.insert({w.issued_units, wi});

    // Operation complete; it occupied [op_begin, t+1) of issue time.
    const std::uint64_t now = t + 1;
    switch (op.kind) {
      case OpKind::local_load:
      case OpKind::compute: {
        (op.stage == Stage::LL ? busy_.ll : busy_.ac) += op.dur;
        sm.last_end = std::max(sm.last_end, now);
        record(w.op_begin, s, wi, op.stage, true);
        record(now, s, wi, op.stage, false);
        advance(wi, now, now);
        break;
      }
      case OpKind::remote_get: {
        const std::uint64_t data_at = std::max(t + op.dur, now);
        w.lr_done = data_at;
        busy_.lr += op.dur;
        remote_bytes_ += op.bytes;
        sm.last_end = std::max(sm.last_end, data_at);
        record(w.op_begin, s, wi, Stage::LR, true);
        record(data_at, s, wi, Stage::LR, false);
        advance(wi, now, op.blocking ? data_at : now);
        break;
      }
      case OpKind::remote_wait:
        assert(false);  // folded inside advance()
        break;
    }
  }

  /// Moves a warp past its finished op (which ended at `now`). `gate` delays
  /// the next operation (blocking remote fetch); remote_wait pseudo-ops fold
  /// into further gating. Time gated past `now` counts as a memory stall.
  void advance(std::uint32_t wi, std::uint64_t now, std::uint64_t gate) {
    WarpRt& w = warps_[wi];
    SmRt& sm = sms_[w.sm];
    std::uint64_t release = now;
    auto apply_gate = [&](std::uint64_t g) {
      if (g > release) {
        w.stall_cycles += g - release;
        release = g;
      }
    };
    apply_gate(gate);

    ++w.pc;
    while (w.pc < w.ops.size() &&
           w.ops[w.pc].kind == OpKind::remote_wait) {
      apply_gate(w.lr_done);
      ++w.pc;
    }

    if (w.pc == w.ops.size()) {
      retire(wi, release);
      return;
    }

    const Op& op = w.ops[w.pc];
    w.op_units = op.kind == OpKind::remote_get
                     ? 1
                     : std::max<std::uint64_t>(1, op.dur);
    w.units_left = w.op_units;
    if (release <= now) return;  // stays runnable for the next cycle
    sm.runnable.erase({w.issued_units, wi});
    events_.push({release, 1, wi});
  }

  void retire(std::uint32_t wi, std::uint64_t at) {
    WarpRt& w = warps_[wi];
    w.done = true;
    w.end = at;
    ++finished_;
    SmRt& sm = sms_[w.sm];
    sm.runnable.erase({w.issued_units, wi});
    sm.last_end = std::max(sm.last_end, at);

    BlockRt& blk = blocks_[w.block];
    blk.last_end = std::max(blk.last_end, at);
    if (--blk.remaining == 0) events_.push({blk.last_end, 0, w.block});
  }

  void dispatch(std::uint64_t at) {
    while (!pending_.empty()) {
      const std::uint32_t b = pending_.front();
      const BlockRt& blk = blocks_[b];
      int best = -1;
      for (std::size_t s = 0; s < sms_.size(); ++s) {
        const SmRt& sm = sms_[s];
        if (sm.free_slots < blk.warp_count ||
            sm.free_smem < plan_.smem_bytes_per_block)
          continue;
        if (best < 0 || sm.free_slots > sms_[best].free_slots ||
            (sm.free_slots == sms_[best].free_slots &&
             sm.free_smem > sms_[best].free_smem))
          best = static_cast<int>(s);
      }
      if (best < 0) break;  // blocks launch in order; wait for resources

      pending_.pop_front();
      SmRt& sm = sms_[best];
      sm.free_slots -= blk.warp_count;
      sm.free_smem -= plan_.smem_bytes_per_block;
      if (!sm.active) {
        sm.active = true;
        sm.first_dispatch = at;
      }
      for (std::uint32_t i = 0; i < blk.warp_count; ++i) {
        const std::uint32_t wi = blk.first_warp + i;
        WarpRt& w = warps_[wi];
        w.sm = best;
        w.arrive = at;
        // Load the first operation (or retire an empty program).
        if (w.ops.empty()) {
          w.pc = 0;
          sm.last_end = std::max(sm.last_end, at);
          w.done = true;
          w.end = at;
          ++finished_;
          BlockRt& owner = blocks_[w.block];
          owner.last_end = std::max(owner.last_end, at);
          if (--owner.remaining == 0) events_.push({owner.last_end, 0, w.block});
          continue;
        }
        const Op& op = w.ops[0];
        w.op_units = op.kind == OpKind::remote_get
                         ? 1
                         : std::max<std::uint64_t>(1, op.dur);
        w.units_left = w.op_units;
        sm.runnable.insert({w.issued_units, wi});
      }
    }
  }

  void record(std::uint64_t cycle, int sm, std::uint32_t warp, Stage stage,
              bool begin) {
    if (!capture_trace_) return;
    trace_.push_back({cycle, static_cast<std::uint32_t>(sm), warp, stage,
                      begin});
  }

  SimReport finalize() {
    SimReport r;
    r.busy = busy_;
    r.remote_bytes = remote_bytes_;
    r.num_warps = static_cast<std::uint32_t>(warps_.size());
    r.num_blocks = static_cast<std::uint32_t>(blocks_.size());

    for (const WarpRt& w : warps_) {
      r.total_cycles = std::max(r.total_cycles, w.end);
      r.occupancy_num += (w.end - w.arrive) - w.stall_cycles;
    }
    for (const SmRt& sm : sms_) {
      if (!sm.active) continue;
      ++r.active_sms;
      r.occupancy_den +=
          (sm.last_end - sm.first_dispatch) * hw_.max_warps_per_sm;
      r.issue_cycles += sm.issue_cycles;
    }
    if (r.occupancy_den > 0)
      r.achieved_occupancy = static_cast<double>(r.occupancy_num) /
                             static_cast<double>(r.occupancy_den);
    if (r.active_sms > 0 && r.total_cycles > 0)
      r.sm_utilization =
          static_cast<double>(r.issue_cycles) /
          static_cast<double>(r.active_sms * r.total_cycles);

    std::stable_sort(trace_.begin(), trace_.end(),
                     [](const TraceEvent& a, const TraceEvent& b) {
                       if (a.cycle != b.cycle) return a.cycle < b.cycle;
                       if (a.sm != b.sm) return a.sm < b.sm;
                       if (a.warp != b.warp) return a.warp < b.warp;
                       return a.begin < b.begin;  // ends before begins
                     });
    r.trace = std::move(trace_);
    return r;
  }

  const KernelLaunchPlan& plan_;
  const HardwareProfile& hw_;
  bool capture_trace_;

  std::vector<WarpRt> warps_;
  std::vector<BlockRt> blocks_;
  std::vector<SmRt> sms_;
  std::deque<std::uint32_t> pending_;
  // min-heap of (cycle, kind 0=block release | 1=warp wake, id)
  std::priority_queue<std::tuple<std::uint64_t, int, std::uint64_t>,
                      std::vector<std::tuple<std::uint64_t, int, std::uint64_t>>,
                      std::greater<>>
      events_;

  StageBusy busy_;
  std::uint64_t remote_bytes_ = 0;
  std::size_t finished_ = 0;
  std::vector<TraceEvent> trace_;
};

void check_inputs(const KernelLaunchPlan& plan, const HardwareProfile& hw,
                  std::uint64_t dim) {
  if (dim != plan.dim)
    throw InputError("simulate: dim does not match the plan's dim");
  validate_plan(plan);
  const std::vector<Violation> v = validate(plan.cfg, hw, dim);
  if (!v.empty()) {
    std::string msg = "simulate: config violates constraints:";
    for (const Violation& x : v) msg += " [" + x.constraint + "] " + x.detail;
    throw ConfigError(msg);
  }
}

SimReport run_discipline(const KernelLaunchPlan& plan,
                         const HardwareProfile& hw, std::uint64_t dim,
                         Transport transport, Discipline discipline,
                         bool capture_trace) {
  OpCosts costs{hw, dim, transport};
  Engine engine(plan, hw, costs, discipline, capture_trace);
  return engine.run();
}

}  // namespace

std::uint64_t remote_partition_bytes(std::uint64_t part_size,
                                     std::uint64_t dim, Transport transport,
                                     std::uint64_t page_bytes) {
  const std::uint64_t embedding_bytes = dim * 4;
  switch (transport) {
    case Transport::fine_grained:
      return part_size * embedding_bytes;
    case Transport::paged: {
      // Every embedding faults its own page(s).
      const std::uint64_t pages =
          (embedding_bytes + page_bytes - 1) / page_bytes;
      return part_size * pages * page_bytes;
    }
  }
  return 0;
}

SimReport simulate(const KernelLaunchPlan& plan, const HardwareProfile& hw,
                   std::uint64_t dim, const ScheduleMode& mode,
                   bool capture_trace) {
  check_inputs(plan, hw, dim);
  const Discipline d = mode.remote == RemoteMode::sync
                           ? Discipline::sync_remote
                           : Discipline::async_remote;
  return run_discipline(plan, hw, dim, mode.transport, d, capture_trace);
}

SimReport simulate_phase_separated(const KernelLaunchPlan& plan,
                                   const HardwareProfile& hw,
                                   std::uint64_t dim, const ScheduleMode& mode,
                                   bool capture_trace) {
  check_inputs(plan, hw, dim);
  SimReport comm = run_discipline(plan, hw, dim, mode.transport,
                                  Discipline::comm_only, capture_trace);
  SimReport comp = run_discipline(plan, hw, dim, mode.transport,
                                  Discipline::compute_only, capture_trace);

  SimReport r;
  r.total_cycles = comm.total_cycles + comp.total_cycles;
  r.busy = {comm.busy.lr + comp.busy.lr, comm.busy.ll + comp.busy.ll,
            comm.busy.ac + comp.busy.ac};
  r.remote_bytes = comm.remote_bytes + comp.remote_bytes;
  r.num_warps = comm.num_warps;
  r.num_blocks = comm.num_blocks;
  r.active_sms = std::max(comm.active_sms, comp.active_sms);
  r.occupancy_num = comm.occupancy_num + comp.occupancy_num;
  r.occupancy_den = comm.occupancy_den + comp.occupancy_den;
  r.issue_cycles = comm.issue_cycles + comp.issue_cycles;
  if (r.occupancy_den > 0)
    r.achieved_occupancy = static_cast<double>(r.occupancy_num) /
                           static_cast<double>(r.occupancy_den);
  const std::uint64_t util_den =
      static_cast<std::uint64_t>(comm.active_sms) * comm.total_cycles +
      static_cast<std::uint64_t>(comp.active_sms) * comp.total_cycles;
  if (util_den > 0)
    r.sm_utilization =
        static_cast<double>(r.issue_cycles) / static_cast<double>(util_den);

  if (capture_trace) {
    r.trace = std::move(comm.trace);
    for (TraceEvent ev : comp.trace) {
      ev.cycle += comm.total_cycles;
      r.trace.push_back(ev);
    }
  }
  return r;
}

SimReport simulate_baseline(const LocalRemoteSplit& lr,
                            const HardwareProfile& hw, std::uint64_t dim,
                            const KernelConfig& cfg, BaselineKind kind,
                            bool capture_trace) {
  ScheduleMode mode;  // async, interleaved, partitioned, fine-grained
  switch (kind) {
    case BaselineKind::no_np:
      mode.granularity = Granularity::whole_list;
      break;
    case BaselineKind::no_interleave:
      mode.mapping = MappingMode::segregated;
      break;
    case BaselineKind::phase_separated:
      break;
    case BaselineKind::paged_remote:
      mode.transport = Transport::paged;
      break;
  }

  KernelLaunchPlan plan =
      build_launch_plan(lr, cfg, dim, mode.mapping, mode.granularity);
  if (kind == BaselineKind::phase_separated)
    return simulate_phase_separated(plan, hw, dim, mode, capture_trace);
  return simulate(plan, hw, dim, mode, capture_trace);
}

MultiGpuReport multi_gpu_run(const CsrGraph& g, std::uint32_t num_gpus,
                             const KernelConfig& cfg,
                             const HardwareProfile& hw, std::uint64_t dim,
                             const ScheduleMode& mode, PlacementMode placement,
                             bool capture_trace) {
  if (num_gpus == 0) throw InputError("multi_gpu_run: num_gpus must be >= 1");

  const WorkloadSplit split = split_by_edges(g, num_gpus);
  const NePlacement ne = plan_ne_placement(g, num_gpus, placement, dim, &split);

  MultiGpuReport r;
  r.barrier_cycles = hw.barrier_cycles;
  for (std::uint32_t gpu = 0; gpu < num_gpus; ++gpu) {
    const LocalRemoteSplit lr = split_local_remote(g, split, ne, gpu);
    const KernelLaunchPlan plan =
        build_launch_plan(lr, cfg, dim, mode.mapping, mode.granularity);
    SimReport rep = simulate(plan, hw, dim, mode, capture_trace);
    r.max_gpu_cycles = std::max(r.max_gpu_cycles, rep.total_cycles);
    r.remote_bytes += rep.remote_bytes;
    r.mean_occupancy += rep.achieved_occupancy;
    r.mean_utilization += rep.sm_utilization;
    r.per_gpu.push_back(std::move(rep));
  }
  r.total_cycles = r.max_gpu_cycles + r.barrier_cycles;
  r.mean_occupancy /= num_gpus;
  r.mean_utilization /= num_gpus;
  return r;
}

std::string trace_to_csv(const SimReport& report) {
  static constexpr const char* kStageNames[] = {"LR", "LL", "AC"};
  std::ostringstream out;
  out << "cycle,sm,warp,stage,event\n";
  for (const TraceEvent& ev : report.trace)
    out << ev.cycle << ',' << ev.sm << ',' << ev.warp << ','
        << kStageNames[static_cast<int>(ev.stage)] << ','
        << (ev.begin ? "begin" : "end") << '\n';
  return out.str();
}

nlohmann::json report_to_json(const SimReport& report) {
  return nlohmann::json{
      {"totalCycles", report.total_cycles},
      {"achievedOccupancy", report.achieved_occupancy},
      {"smUtilization", report.sm_utilization},
      {"busyCycles",
       {{"LR", report.busy.lr}, {"LL", report.busy.ll}, {"AC", report.busy.ac}}},
      {"remoteBytes", report.remote_bytes},
      {"numWarps", report.num_warps},
      {"numBlocks", report.num_blocks},
      {"activeSMs", report.active_sms}};
}

nlohmann::json report_to_json(const MultiGpuReport& report) {
  nlohmann::json gpus = nlohmann::json::array();
  for (const SimReport& rep : report.per_gpu) gpus.push_back(report_to_json(rep));
  return nlohmann::json{{"aggregate",
                         {{"totalCycles", report.total_cycles},
                          {"maxGpuCycles", report.max_gpu_cycles},
                          {"barrierCycles", report.barrier_cycles},
                          {"remoteBytes", report.remote_bytes},
                          {"meanOccupancy", report.mean_occupancy},
                          {"meanUtilization", report.mean_utilization}}},
                        {"gpus", std::move(gpus)}};
}

}  // namespace pipeshard
