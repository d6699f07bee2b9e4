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
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace pipeshard {

using NodeId = std::uint64_t;
using EdgeOffset = std::uint64_t;

/// Compressed-sparse-row adjacency. Immutable after construction; per-row
/// neighbor lists are kept sorted ascending and duplicate edges are
/// preserved.
struct CsrGraph {
  std::uint64_t num_nodes = 0;
  std::vector<EdgeOffset> row_ptr;  // length num_nodes + 1
  std::vector<NodeId> col_idx;      // length num_edges

  std::uint64_t num_edges() const { return col_idx.size(); }

  std::uint64_t degree(NodeId v) const { return row_ptr[v + 1] - row_ptr[v]; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return std::span<const NodeId>(col_idx.data() + row_ptr[v],
                                   row_ptr[v + 1] - row_ptr[v]);
  }

  std::uint64_t max_degree() const;
};

struct DegreeStats {
  std::uint64_t min_degree = 0;
  std::uint64_t max_degree = 0;
  double mean_degree = 0.0;
  std::vector<std::uint64_t> histogram;  // histogram[d] = #nodes of degree d
};

enum class SyntheticKind { uniform, powerlaw };

/// Throws InputError if the CSR invariants do not hold.
void validate_csr(const CsrGraph& g);

/// Builds a CSR from an arbitrary edge list. Edges are grouped by source and
/// each row is sorted ascending; duplicates survive. Node ids >= num_nodes
/// raise InputError.
CsrGraph from_edges(std::uint64_t num_nodes,
                    std::span<const std::pair<NodeId, NodeId>> edges);

/// Parses whitespace-separated "src dst" lines. Lines whose first non-blank
/// character is '#' or '%' are skipped. The node count is 1 + the largest id
/// seen. An input with no edges raises ParseError (the node count would be
/// unknowable); malformed tokens raise ParseError with the line number.
CsrGraph load_edge_list(std::istream& in);

/// Deterministic synthetic workloads for a given seed.
///   uniform:  every node draws round-about avg_degree neighbors i.i.d.
///   powerlaw: degrees follow a Pareto-style tail, clipped to [1, n-1].
CsrGraph gen_synthetic(SyntheticKind kind, std::uint64_t num_nodes,
                       double avg_degree, std::uint64_t seed);

DegreeStats degree_stats(const CsrGraph& g);

/// Binary dump: little-endian u64 num_nodes, num_edges, then row_ptr and
/// col_idx as u64 arrays.
void save_csr(const CsrGraph& g, std::ostream& out);
CsrGraph load_csr(std::istream& in);

}  // namespace pipeshard
