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

#include "pipeshard/workload.hpp"

#include <algorithm>
#include <string>

#include "pipeshard/errors.hpp"

namespace pipeshard {

LocalRemoteSplit split_local_remote(const CsrGraph& g,
                                    const WorkloadSplit& split,
                                    const NePlacement& placement,
                                    std::uint32_t gpu_id) {
  if (gpu_id >= split.num_gpus)
    throw InputError("split_local_remote: gpu_id out of range");
  if (split.num_nodes != g.num_nodes || placement.num_nodes != g.num_nodes)
    throw InputError("split_local_remote: inconsistent node counts");

  const NodeRange chunk = split.chunk_ranges[gpu_id];

  LocalRemoteSplit out;
  out.gpu_id = gpu_id;
  out.first_target = chunk.lb;

  const std::uint64_t rows = chunk.size();
  out.local_csr.num_nodes = rows;
  out.remote_csr.num_nodes = rows;
  out.local_csr.row_ptr.assign(rows + 1, 0);
  out.remote_csr.row_ptr.assign(rows + 1, 0);

  for (std::uint64_t r = 0; r < rows; ++r) {
    for (NodeId nb : g.neighbors(chunk.lb + r)) {
      if (translate(placement, nb).gpu == gpu_id)
        out.local_csr.col_idx.push_back(nb);
      else
        out.remote_csr.col_idx.push_back(nb);
    }
    out.local_csr.row_ptr[r + 1] = out.local_csr.col_idx.size();
    out.remote_csr.row_ptr[r + 1] = out.remote_csr.col_idx.size();
  }
  return out;
}

std::vector<NeighborPartition> partition_neighbors(const CsrGraph& csr,
                                                   NodeId first_target,
                                                   PartKind kind,
                                                   std::uint32_t ps) {
  if (ps < 1 || ps > kMaxPs)
    throw ConfigError("partition_neighbors: ps=" + std::to_string(ps) +
                      " outside [1," + std::to_string(kMaxPs) + "]");

  std::vector<NeighborPartition> parts;
  for (std::uint64_t r = 0; r < csr.num_nodes; ++r) {
    auto nbs = csr.neighbors(r);
    for (std::size_t off = 0; off < nbs.size(); off += ps) {
      NeighborPartition p;
      p.target = first_target + r;
      p.kind = kind;
      std::size_t end = std::min(off + ps, nbs.size());
      p.neighbors.assign(nbs.begin() + static_cast<std::ptrdiff_t>(off),
                         nbs.begin() + static_cast<std::ptrdiff_t>(end));
      parts.push_back(std::move(p));
    }
  }
  return parts;
}

namespace {

void check_dist(std::uint32_t dist) {
  if (dist < 1 || dist > kMaxDist)
    throw ConfigError("interleave: dist=" + std::to_string(dist) +
                      " outside [1," + std::to_string(kMaxDist) + "]");
}

void append_group(WarpWorkload& warp, PartKind kind, std::uint64_t begin,
                  std::uint64_t count, std::uint64_t total,
                  std::uint32_t dist) {
  const std::uint64_t end = std::min<std::uint64_t>(begin + dist, total);
  (void)count;
  for (std::uint64_t i = begin; i < end; ++i)
    warp.tasks.push_back({kind, static_cast<std::uint32_t>(i)});
}

}  // namespace

std::vector<WarpWorkload> interleave(
    const std::vector<NeighborPartition>& local_parts,
    const std::vector<NeighborPartition>& remote_parts, std::uint32_t dist) {
  check_dist(dist);

  const std::uint64_t n_local = local_parts.size();
  const std::uint64_t n_remote = remote_parts.size();
  const std::uint64_t longest = std::max(n_local, n_remote);
  const std::uint64_t num_warps = (longest + dist - 1) / dist;

  std::vector<WarpWorkload> warps(num_warps);
  for (std::uint64_t w = 0; w < num_warps; ++w) {
    warps[w].warp_id = static_cast<std::uint32_t>(w);
    const std::uint64_t group_begin = w * dist;
    if (group_begin < n_local)
      append_group(warps[w], PartKind::local, group_begin, dist, n_local, dist);
    if (group_begin < n_remote)
      append_group(warps[w], PartKind::remote, group_begin, dist, n_remote,
                   dist);
  }
  return warps;
}

std::vector<WarpWorkload> map_segregated(
    const std::vector<NeighborPartition>& local_parts,
    const std::vector<NeighborPartition>& remote_parts, std::uint32_t dist) {
  check_dist(dist);

  std::vector<WarpWorkload> warps;
  std::uint32_t warp_id = 0;
  for (std::uint64_t begin = 0; begin < local_parts.size(); begin += dist) {
    WarpWorkload w;
    w.warp_id = warp_id++;
    append_group(w, PartKind::local, begin, dist, local_parts.size(), dist);
    warps.push_back(std::move(w));
  }
  for (std::uint64_t begin = 0; begin < remote_parts.size(); begin += dist) {
    WarpWorkload w;
    w.warp_id = warp_id++;
    append_group(w, PartKind::remote, begin, dist, remote_parts.size(), dist);
    warps.push_back(std::move(w));
  }
  return warps;
}

KernelLaunchPlan map_to_blocks(std::vector<NeighborPartition> local_parts,
                               std::vector<NeighborPartition> remote_parts,
                               std::vector<WarpWorkload> warps,
                               const KernelConfig& cfg, std::uint64_t dim) {
  if (cfg.wpb < 1 || cfg.wpb > kMaxWpb)
    throw ConfigError("map_to_blocks: wpb=" + std::to_string(cfg.wpb) +
                      " outside [1," + std::to_string(kMaxWpb) + "]");

  KernelLaunchPlan plan;
  plan.cfg = cfg;
  plan.dim = dim;
  plan.local_parts = std::move(local_parts);
  plan.remote_parts = std::move(remote_parts);
  plan.warps = std::move(warps);
  plan.smem_bytes_per_block = smem(cfg, dim);

  for (std::uint64_t first = 0; first < plan.warps.size(); first += cfg.wpb) {
    BlockAssignment b;
    b.first_warp = static_cast<std::uint32_t>(first);
    b.warp_count = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(cfg.wpb, plan.warps.size() - first));
    plan.blocks.push_back(b);
  }
  return plan;
}

KernelLaunchPlan build_launch_plan(const LocalRemoteSplit& lr,
                                   const KernelConfig& cfg, std::uint64_t dim,
                                   MappingMode mapping,
                                   Granularity granularity) {
  // whole_list keeps each node's full neighbor list as one task; the ps knob
  // only applies to the partitioned granularity.
  std::vector<NeighborPartition> local;
  std::vector<NeighborPartition> remote;
  if (granularity == Granularity::partitioned) {
    local = partition_neighbors(lr.local_csr, lr.first_target, PartKind::local,
                                cfg.ps);
    remote = partition_neighbors(lr.remote_csr, lr.first_target,
                                 PartKind::remote, cfg.ps);
  } else {
    auto whole = [&](const CsrGraph& csr, PartKind kind) {
      std::vector<NeighborPartition> parts;
      for (std::uint64_t r = 0; r < csr.num_nodes; ++r) {
        auto nbs = csr.neighbors(r);
        if (nbs.empty()) continue;
        NeighborPartition p;
        p.target = lr.first_target + r;
        p.kind = kind;
        p.neighbors.assign(nbs.begin(), nbs.end());
        parts.push_back(std::move(p));
      }
      return parts;
    };
    local = whole(lr.local_csr, PartKind::local);
    remote = whole(lr.remote_csr, PartKind::remote);
  }

  std::vector<WarpWorkload> warps =
      mapping == MappingMode::interleaved
          ? interleave(local, remote, cfg.dist)
          : map_segregated(local, remote, cfg.dist);
  return map_to_blocks(std::move(local), std::move(remote), std::move(warps),
                       cfg, dim);
}

void validate_plan(const KernelLaunchPlan& plan) {
  std::vector<std::uint8_t> seen_local(plan.local_parts.size(), 0);
  std::vector<std::uint8_t> seen_remote(plan.remote_parts.size(), 0);

  for (const WarpWorkload& w : plan.warps) {
    for (const WarpTask& t : w.tasks) {
      auto& seen = t.kind == PartKind::local ? seen_local : seen_remote;
      const std::size_t limit = t.kind == PartKind::local
                                    ? plan.local_parts.size()
                                    : plan.remote_parts.size();
      if (t.index >= limit)
        throw IntegrityError("plan: warp " + std::to_string(w.warp_id) +
                             " references unknown partition " +
                             std::to_string(t.index));
      if (seen[t.index]++)
        throw IntegrityError("plan: partition " + std::to_string(t.index) +
                             " assigned to more than one warp");
    }
  }
  for (std::size_t i = 0; i < seen_local.size(); ++i)
    if (!seen_local[i])
      throw IntegrityError("plan: local partition " + std::to_string(i) +
                           " not assigned to any warp");
  for (std::size_t i = 0; i < seen_remote.size(); ++i)
    if (!seen_remote[i])
      throw IntegrityError("plan: remote partition " + std::to_string(i) +
                           " not assigned to any warp");

  std::uint64_t covered = 0;
  for (const BlockAssignment& b : plan.blocks) {
    if (b.first_warp != covered || b.warp_count == 0 ||
        b.warp_count > plan.cfg.wpb)
      throw IntegrityError("plan: blocks must tile warps in order");
    covered += b.warp_count;
  }
  if (covered != plan.warps.size())
    throw IntegrityError("plan: blocks do not cover all warps");
}

namespace {

void to_json(nlohmann::json& j, const NeighborPartition& p) {
  j = nlohmann::json{{"target", p.target},
                     {"kind", p.kind == PartKind::local ? "local" : "remote"},
                     {"neighbors", p.neighbors}};
}

NeighborPartition partition_from_json(const nlohmann::json& j) {
  NeighborPartition p;
  p.target = j.at("target").get<NodeId>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "local")
    p.kind = PartKind::local;
  else if (kind == "remote")
    p.kind = PartKind::remote;
  else
    throw ParseError("plan: unknown partition kind '" + kind + "'", 0);
  j.at("neighbors").get_to(p.neighbors);
  return p;
}

}  // namespace

void to_json(nlohmann::json& j, const KernelLaunchPlan& plan) {
  nlohmann::json local = nlohmann::json::array();
  for (const auto& p : plan.local_parts) {
    nlohmann::json pj;
    to_json(pj, p);
    local.push_back(std::move(pj));
  }
  nlohmann::json remote = nlohmann::json::array();
  for (const auto& p : plan.remote_parts) {
    nlohmann::json pj;
    to_json(pj, p);
    remote.push_back(std::move(pj));
  }

  nlohmann::json warps = nlohmann::json::array();
  for (const auto& w : plan.warps) {
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : w.tasks)
      tasks.push_back(nlohmann::json::array(
          {t.kind == PartKind::local ? "local" : "remote", t.index}));
    warps.push_back({{"warp", w.warp_id}, {"tasks", std::move(tasks)}});
  }

  j = nlohmann::json{{"cfg", plan.cfg},
                     {"dim", plan.dim},
                     {"smemBytesPerBlock", plan.smem_bytes_per_block},
                     {"localParts", std::move(local)},
                     {"remoteParts", std::move(remote)},
                     {"warps", std::move(warps)}};
}

void from_json(const nlohmann::json& j, KernelLaunchPlan& plan) {
  plan = KernelLaunchPlan{};
  j.at("cfg").get_to(plan.cfg);
  j.at("dim").get_to(plan.dim);
  j.at("smemBytesPerBlock").get_to(plan.smem_bytes_per_block);
  for (const auto& pj : j.at("localParts"))
    plan.local_parts.push_back(partition_from_json(pj));
  for (const auto& pj : j.at("remoteParts"))
    plan.remote_parts.push_back(partition_from_json(pj));

  for (const auto& wj : j.at("warps")) {
    WarpWorkload w;
    w.warp_id = wj.at("warp").get<std::uint32_t>();
    for (const auto& tj : wj.at("tasks")) {
      const std::string kind = tj.at(0).get<std::string>();
      WarpTask t{kind == "local" ? PartKind::local : PartKind::remote,
                 tj.at(1).get<std::uint32_t>()};
      w.tasks.push_back(t);
    }
    plan.warps.push_back(std::move(w));
  }

  // Rebuild the block grouping from wpb; it is derived data.
  for (std::uint64_t first = 0; first < plan.warps.size();
       first += plan.cfg.wpb) {
    BlockAssignment b;
    b.first_warp = static_cast<std::uint32_t>(first);
    b.warp_count = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(plan.cfg.wpb, plan.warps.size() - first));
    plan.blocks.push_back(b);
  }
  validate_plan(plan);
}

}  // namespace pipeshard
