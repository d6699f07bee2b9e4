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

#include "pipeshard/graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "pipeshard/errors.hpp"
#include "pipeshard/rng.hpp"

namespace pipeshard {

std::uint64_t CsrGraph::max_degree() const {
  std::uint64_t m = 0;
  for (std::uint64_t v = 0; v < num_nodes; ++v) m = std::max(m, degree(v));
  return m;
}

void validate_csr(const CsrGraph& g) {
  if (g.row_ptr.size() != g.num_nodes + 1)
    throw InputError("csr: row_ptr length must be num_nodes + 1");
  if (g.row_ptr.front() != 0) throw InputError("csr: row_ptr[0] must be 0");
  if (g.row_ptr.back() != g.col_idx.size())
    throw InputError("csr: row_ptr[num_nodes] must equal num_edges");
  for (std::size_t i = 1; i < g.row_ptr.size(); ++i)
    if (g.row_ptr[i] < g.row_ptr[i - 1])
      throw InputError("csr: row_ptr must be non-decreasing");
  for (NodeId c : g.col_idx)
    if (c >= g.num_nodes) throw InputError("csr: col_idx entry out of range");
}

CsrGraph from_edges(std::uint64_t num_nodes,
                    std::span<const std::pair<NodeId, NodeId>> edges) {
  CsrGraph g;
  g.num_nodes = num_nodes;
  g.row_ptr.assign(num_nodes + 1, 0);

  for (const auto& [src, dst] : edges) {
    if (src >= num_nodes || dst >= num_nodes)
      throw InputError("from_edges: node id " +
                       std::to_string(std::max(src, dst)) +
                       " out of range (num_nodes=" + std::to_string(num_nodes) +
                       ")");
    ++g.row_ptr[src + 1];
  }
  for (std::size_t i = 1; i < g.row_ptr.size(); ++i)
    g.row_ptr[i] += g.row_ptr[i - 1];

  g.col_idx.resize(edges.size());
  std::vector<EdgeOffset> cursor(g.row_ptr.begin(), g.row_ptr.end() - 1);
  for (const auto& [src, dst] : edges) g.col_idx[cursor[src]++] = dst;

  for (std::uint64_t v = 0; v < num_nodes; ++v)
    std::sort(g.col_idx.begin() + static_cast<std::ptrdiff_t>(g.row_ptr[v]),
              g.col_idx.begin() + static_cast<std::ptrdiff_t>(g.row_ptr[v + 1]));
  return g;
}

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    return c == '#' || c == '%';
  }
  return true;  // blank
}

NodeId parse_node_id(const std::string& tok, std::size_t line_no) {
  NodeId value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("edge list: expected integer node id, got '" + tok + "'",
                     line_no);
  return value;
}

}  // namespace

CsrGraph load_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId max_id = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;

    std::array<std::string, 2> tok;
    std::size_t ntok = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
        ++i;
      if (i >= line.size()) break;
      std::size_t start = i;
      while (i < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[i])))
        ++i;
      if (ntok >= tok.size())
        throw ParseError("edge list: expected 'src dst', found extra token",
                         line_no);
      tok[ntok++] = line.substr(start, i - start);
    }
    if (ntok != 2)
      throw ParseError("edge list: expected 'src dst'", line_no);

    NodeId src = parse_node_id(tok[0], line_no);
    NodeId dst = parse_node_id(tok[1], line_no);
    max_id = std::max({max_id, src, dst});
    edges.emplace_back(src, dst);
  }

  if (edges.empty())
    throw ParseError("edge list: no edges found, node count unknown", 0);
  return from_edges(max_id + 1, edges);
}

CsrGraph gen_synthetic(SyntheticKind kind, std::uint64_t num_nodes,
                       double avg_degree, std::uint64_t seed) {
  if (num_nodes < 1) throw InputError("gen_synthetic: num_nodes must be >= 1");
  if (avg_degree < 0) throw InputError("gen_synthetic: avg_degree must be >= 0");

  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<std::size_t>(avg_degree * num_nodes) + num_nodes);

  for (std::uint64_t v = 0; v < num_nodes; ++v) {
    std::uint64_t deg = 0;
    switch (kind) {
      case SyntheticKind::uniform: {
        // Integer part always, fractional part by per-node rounding.
        deg = static_cast<std::uint64_t>(avg_degree);
        double frac = avg_degree - static_cast<double>(deg);
        if (rng.next_unit() < frac) ++deg;
        break;
      }
      case SyntheticKind::powerlaw: {
        // Pareto tail with shape 2.5; scale chosen so the mean lands near
        // avg_degree. Clipped to [1, n-1].
        const double alpha = 1.6;
        const double x_min = std::max(0.5, avg_degree * (alpha - 1.0) / alpha);
        double u = rng.next_unit();
        double x = x_min * std::pow(1.0 - u, -1.0 / alpha);
        double cap = static_cast<double>(num_nodes - 1);
        if (num_nodes == 1) cap = 1.0;
        deg = static_cast<std::uint64_t>(
            std::clamp(std::floor(x), 1.0, std::max(cap, 1.0)));
        break;
      }
    }
    for (std::uint64_t k = 0; k < deg; ++k)
      edges.emplace_back(v, rng.next_below(num_nodes));
  }
  return from_edges(num_nodes, edges);
}

DegreeStats degree_stats(const CsrGraph& g) {
  DegreeStats s;
  if (g.num_nodes == 0) return s;

  s.min_degree = g.degree(0);
  for (std::uint64_t v = 0; v < g.num_nodes; ++v) {
    std::uint64_t d = g.degree(v);
    s.min_degree = std::min(s.min_degree, d);
    s.max_degree = std::max(s.max_degree, d);
  }
  s.mean_degree =
      static_cast<double>(g.num_edges()) / static_cast<double>(g.num_nodes);
  s.histogram.assign(s.max_degree + 1, 0);
  for (std::uint64_t v = 0; v < g.num_nodes; ++v) ++s.histogram[g.degree(v)];
  return s;
}

namespace {

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<char, 8> buf;
  in.read(buf.data(), buf.size());
  if (in.gcount() != 8) throw ParseError("csr dump: truncated stream", 0);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  return v;
}

}  // namespace

void save_csr(const CsrGraph& g, std::ostream& out) {
  put_u64_le(out, g.num_nodes);
  put_u64_le(out, g.num_edges());
  for (EdgeOffset p : g.row_ptr) put_u64_le(out, p);
  for (NodeId c : g.col_idx) put_u64_le(out, c);
}

CsrGraph load_csr(std::istream& in) {
  CsrGraph g;
  g.num_nodes = get_u64_le(in);
  std::uint64_t num_edges = get_u64_le(in);
  g.row_ptr.resize(g.num_nodes + 1);
  for (auto& p : g.row_ptr) p = get_u64_le(in);
  g.col_idx.resize(num_edges);
  for (auto& c : g.col_idx) c = get_u64_le(in);
  validate_csr(g);
  return g;
}

}  // namespace pipeshard
