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

#include "pipeshard/placement.hpp"

#include <algorithm>
#include <string>

#include "pipeshard/costmodel.hpp"
#include "pipeshard/errors.hpp"

namespace pipeshard {

namespace {

std::vector<NodeRange> ranges_from_split_points(
    const std::vector<NodeId>& points, std::uint64_t num_nodes) {
  std::vector<NodeRange> ranges;
  ranges.reserve(points.size() + 1);
  NodeId lb = 0;
  for (NodeId p : points) {
    ranges.push_back({lb, p});
    lb = p;
  }
  ranges.push_back({lb, num_nodes});
  return ranges;
}

}  // namespace

WorkloadSplit split_by_edges(const CsrGraph& g, std::uint32_t num_gpus) {
  if (num_gpus == 0) throw InputError("split_by_edges: num_gpus must be >= 1");
  validate_csr(g);

  WorkloadSplit s;
  s.num_gpus = num_gpus;
  s.num_nodes = g.num_nodes;

  const std::uint64_t edges_per_gpu =
      num_gpus == 0 ? 0 : (g.num_edges() + num_gpus - 1) / num_gpus;

  NodeId last_pos = 0;
  for (std::uint32_t i = 0; i + 1 < num_gpus; ++i) {
    NodeId nid = g.num_nodes;
    if (last_pos < g.num_nodes) {
      const EdgeOffset target =
          std::min(g.row_ptr[last_pos] + edges_per_gpu, g.num_edges());
      // Smallest nid in (last_pos, num_nodes] with row_ptr[nid] >= target.
      auto begin = g.row_ptr.begin() + static_cast<std::ptrdiff_t>(last_pos) + 1;
      auto it = std::lower_bound(begin, g.row_ptr.end(), target);
      nid = static_cast<NodeId>(it - g.row_ptr.begin());
    }
    s.split_points.push_back(nid);
    last_pos = nid;
  }
  s.chunk_ranges = ranges_from_split_points(s.split_points, g.num_nodes);
  return s;
}

NePlacement plan_ne_placement(const CsrGraph& g, std::uint32_t num_gpus,
                              PlacementMode mode, std::uint64_t dim,
                              const WorkloadSplit* split) {
  if (num_gpus == 0)
    throw InputError("plan_ne_placement: num_gpus must be >= 1");
  if (dim == 0) throw InputError("plan_ne_placement: dim must be >= 1");

  NePlacement p;
  p.mode = mode;
  p.num_gpus = num_gpus;
  p.num_nodes = g.num_nodes;
  p.dim = dim;

  switch (mode) {
    case PlacementMode::equal_nodes: {
      const std::uint64_t per_gpu = (g.num_nodes + num_gpus - 1) / num_gpus;
      for (std::uint32_t i = 0; i < num_gpus; ++i) {
        NodeId lb = std::min<std::uint64_t>(i * per_gpu, g.num_nodes);
        NodeId ub = std::min<std::uint64_t>((i + 1) * per_gpu, g.num_nodes);
        p.ranges.push_back({lb, ub});
      }
      break;
    }
    case PlacementMode::follow_split: {
      if (split == nullptr)
        throw InputError("plan_ne_placement: follow_split needs a WorkloadSplit");
      if (split->num_gpus != num_gpus || split->num_nodes != g.num_nodes)
        throw InputError("plan_ne_placement: split does not match graph/gpus");
      p.ranges = split->chunk_ranges;
      break;
    }
  }
  return p;
}

Owner translate(const NePlacement& p, NodeId global_id) {
  if (global_id >= p.num_nodes)
    throw InputError("translate: node id " + std::to_string(global_id) +
                     " out of range");
  // Ranges tile [0, N) in ascending order: find the first range whose upper
  // bound is past the id. Empty ranges are skipped naturally (ub <= id).
  auto it = std::upper_bound(
      p.ranges.begin(), p.ranges.end(), global_id,
      [](NodeId v, const NodeRange& r) { return v < r.ub; });
  return Owner{static_cast<std::uint32_t>(it - p.ranges.begin()),
               global_id - it->lb};
}

FootprintReport memory_footprint(const CsrGraph& g, const NePlacement& p,
                                 const WorkloadSplit& split,
                                 const HardwareProfile& hw) {
  if (p.num_nodes != g.num_nodes || split.num_nodes != g.num_nodes)
    throw InputError("memory_footprint: inconsistent node counts");

  constexpr std::uint64_t kFloatBytes = 4;
  constexpr std::uint64_t kIndexBytes = 8;

  FootprintReport r;
  r.device_mem_bytes = hw.device_mem_bytes;
  r.fits = true;

  const std::uint32_t n = std::max(p.num_gpus, split.num_gpus);
  for (std::uint32_t i = 0; i < n; ++i) {
    GpuFootprint f;
    if (i < p.num_gpus)
      f.ne_bytes = p.ranges[i].size() * p.dim * kFloatBytes;
    if (i < split.num_gpus) {
      const NodeRange& c = split.chunk_ranges[i];
      f.gp_bytes = (c.size() + 1) * kIndexBytes +        // row_ptr slice
                   split.chunk_edges(g, i) * kIndexBytes;  // col_idx slice
    }
    if (f.total() > hw.device_mem_bytes) r.fits = false;
    r.per_gpu.push_back(f);
  }
  return r;
}

void to_json(nlohmann::json& j, const NodeRange& r) {
  j = nlohmann::json::array({r.lb, r.ub});
}

void from_json(const nlohmann::json& j, NodeRange& r) {
  r.lb = j.at(0).get<NodeId>();
  r.ub = j.at(1).get<NodeId>();
}

void to_json(nlohmann::json& j, const WorkloadSplit& s) {
  j = nlohmann::json{{"numGpus", s.num_gpus},
                     {"numNodes", s.num_nodes},
                     {"splitPoints", s.split_points},
                     {"chunkRanges", s.chunk_ranges}};
}

void from_json(const nlohmann::json& j, WorkloadSplit& s) {
  j.at("numGpus").get_to(s.num_gpus);
  j.at("numNodes").get_to(s.num_nodes);
  j.at("splitPoints").get_to(s.split_points);
  j.at("chunkRanges").get_to(s.chunk_ranges);
}

namespace {

std::string mode_name(PlacementMode m) {
  return m == PlacementMode::equal_nodes ? "equal-nodes" : "follow-split";
}

PlacementMode mode_from_name(const std::string& name) {
  if (name == "equal-nodes") return PlacementMode::equal_nodes;
  if (name == "follow-split") return PlacementMode::follow_split;
  throw ParseError("unknown placement mode '" + name + "'", 0);
}

}  // namespace

void to_json(nlohmann::json& j, const NePlacement& p) {
  j = nlohmann::json{{"mode", mode_name(p.mode)},
                     {"numGpus", p.num_gpus},
                     {"numNodes", p.num_nodes},
                     {"dim", p.dim},
                     {"ranges", p.ranges}};
}

void from_json(const nlohmann::json& j, NePlacement& p) {
  p.mode = mode_from_name(j.at("mode").get<std::string>());
  j.at("numGpus").get_to(p.num_gpus);
  j.at("numNodes").get_to(p.num_nodes);
  j.at("dim").get_to(p.dim);
  j.at("ranges").get_to(p.ranges);
}

}  // namespace pipeshard
