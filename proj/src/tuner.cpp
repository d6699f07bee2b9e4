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

#include "pipeshard/tuner.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include "pipeshard/errors.hpp"

namespace pipeshard {

namespace {

using ConfigKey = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;

ConfigKey key_of(const KernelConfig& c) { return {c.ps, c.dist, c.wpb}; }

std::string cfg_str(const KernelConfig& c) {
  return "(ps=" + std::to_string(c.ps) + ", dist=" + std::to_string(c.dist) +
         ", wpb=" + std::to_string(c.wpb) + ")";
}

class Search {
 public:
  Search(const SimulateFn& simulate, const HardwareProfile& hw,
         std::uint64_t dim, const TuneOptions& opts)
      : simulate_(simulate), hw_(hw), dim_(dim), opts_(opts) {}

  bool valid(const KernelConfig& c) const {
    return validate(c, hw_, dim_).empty();
  }

  bool stopped() const { return stopped_; }

  /// Returns the measured cycles, or nullopt when the search has stopped.
  /// Re-measuring a known config hits the lookup table and is free.
  std::optional<std::uint64_t> eval(const KernelConfig& c) {
    if (auto it = table_.find(key_of(c)); it != table_.end())
      return it->second;
    if (stopped_) return std::nullopt;

    std::uint64_t cycles = 0;
    try {
      cycles = simulate_(c);
    } catch (const std::exception& e) {
      throw std::runtime_error("tuner: measurement failed at " + cfg_str(c) +
                               ": " + e.what());
    }
    table_[key_of(c)] = cycles;
    entries_.push_back({c, cycles});
    update_stop();
    return cycles;
  }

  /// Climbs `steps` for one parameter while latency strictly improves.
  /// Returns the best config and whether a step measurably raised latency.
  std::pair<KernelConfig, bool> ascend(
      KernelConfig base, const std::vector<std::uint32_t>& steps,
      std::uint32_t KernelConfig::* param) {
    KernelConfig best = base;
    std::uint64_t best_cycles = table_.at(key_of(base));
    bool raised = false;
    for (std::uint32_t v : steps) {
      if (v <= base.*param) continue;
      KernelConfig next = best;
      next.*param = v;
      if (!valid(next)) break;  // constraints only tighten with larger steps
      auto c = eval(next);
      if (!c) break;
      if (*c < best_cycles) {
        best = next;
        best_cycles = *c;
      } else {
        raised = *c > best_cycles;
        break;
      }
      if (stopped_) break;
    }
    return {best, raised};
  }

  const std::vector<TuneEntry>& entries() const { return entries_; }

 private:
  void update_stop() {
    if (entries_.size() >= opts_.max_evaluations) {
      stopped_ = true;
      return;
    }
    if (entries_.size() < 3) return;
    std::vector<std::uint64_t> sorted;
    sorted.reserve(entries_.size());
    for (const TuneEntry& e : entries_) sorted.push_back(e.cycles);
    std::sort(sorted.begin(), sorted.end());
    const std::uint64_t third_best = sorted[2];
    for (std::size_t i = entries_.size() - 3; i < entries_.size(); ++i)
      if (entries_[i].cycles <= third_best) return;
    stopped_ = true;  // the last three could not touch the top 3
  }

  const SimulateFn& simulate_;
  const HardwareProfile& hw_;
  std::uint64_t dim_;
  const TuneOptions& opts_;
  std::map<ConfigKey, std::uint64_t> table_;
  std::vector<TuneEntry> entries_;
  bool stopped_ = false;
};

}  // namespace

TuneTrace optimize(const SimulateFn& simulate, const HardwareProfile& hw,
                   std::uint64_t dim, const TuneOptions& opts) {
  Search search(simulate, hw, dim, opts);

  KernelConfig start{1, 1, 1};
  if (!search.valid(start))
    throw ConfigError("optimize: starting config (1,1,1) violates constraints");
  search.eval(start);

  auto [after_ps, ps_raised] =
      search.ascend(start, opts.ps_steps, &KernelConfig::ps);
  (void)ps_raised;
  // Remember how each ps value measured while dist/wpb were still 1; the
  // retreat rule picks from these.
  std::vector<TuneEntry> ps_phase(search.entries().begin(),
                                  search.entries().end());

  auto [after_dist, dist_raised] =
      search.ascend(after_ps, opts.dist_steps, &KernelConfig::dist);
  (void)dist_raised;

  auto [after_wpb, wpb_raised] =
      search.ascend(after_dist, opts.wpb_steps, &KernelConfig::wpb);
  (void)after_wpb;

  if (wpb_raised && !search.stopped() && ps_phase.size() >= 2) {
    std::vector<TuneEntry> ranked = ps_phase;
    if (opts.retreat == RetreatRule::latency_rank)
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const TuneEntry& a, const TuneEntry& b) {
                         return a.cycles < b.cycles;
                       });
    else
      std::stable_sort(ranked.begin(), ranked.end(),
                       [](const TuneEntry& a, const TuneEntry& b) {
                         return a.cfg.ps > b.cfg.ps;
                       });
    const std::uint32_t second_ps = ranked[1].cfg.ps;
    if (second_ps != after_dist.ps) {
      KernelConfig retreat_base{second_ps, after_dist.dist, 1};
      if (search.valid(retreat_base) && search.eval(retreat_base))
        search.ascend(retreat_base, opts.wpb_steps, &KernelConfig::wpb);
    }
  }

  TuneTrace trace;
  trace.entries = search.entries();
  if (trace.entries.empty())
    throw ConfigError("optimize: no configuration was measured");
  const TuneEntry* best = &trace.entries.front();
  for (const TuneEntry& e : trace.entries)
    if (e.cycles < best->cycles) best = &e;
  trace.best = best->cfg;
  trace.best_cycles = best->cycles;
  return trace;
}

ExhaustiveResult exhaustive(const SimulateFn& simulate,
                            const HardwareProfile& hw, std::uint64_t dim,
                            const TuneOptions& grid) {
  const std::size_t points =
      grid.ps_steps.size() * grid.dist_steps.size() * grid.wpb_steps.size();
  if (points > 1024)
    throw InputError("exhaustive: grid has " + std::to_string(points) +
                     " points, limit is 1024");

  ExhaustiveResult result;
  for (std::uint32_t ps : grid.ps_steps)
    for (std::uint32_t dist : grid.dist_steps)
      for (std::uint32_t wpb : grid.wpb_steps) {
        KernelConfig cfg{ps, dist, wpb};
        if (!validate(cfg, hw, dim).empty()) continue;
        std::uint64_t cycles = 0;
        try {
          cycles = simulate(cfg);
        } catch (const std::exception& e) {
          throw std::runtime_error("exhaustive: measurement failed at " +
                                   cfg_str(cfg) + ": " + e.what());
        }
        result.table.push_back({cfg, cycles});
      }

  if (result.table.empty())
    throw ConfigError("exhaustive: no grid point passes validation");

  std::sort(result.table.begin(), result.table.end(),
            [](const TuneEntry& a, const TuneEntry& b) {
              return std::tie(a.cycles, a.cfg.ps, a.cfg.dist, a.cfg.wpb) <
                     std::tie(b.cycles, b.cfg.ps, b.cfg.dist, b.cfg.wpb);
            });
  result.best = result.table.front().cfg;
  result.best_cycles = result.table.front().cycles;
  return result;
}

std::string trace_to_csv(const TuneTrace& trace) {
  // rank 1 = lowest latency; ties kept in evaluation order
  std::vector<std::size_t> order(trace.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return trace.entries[a].cycles < trace.entries[b].cycles;
                   });
  std::vector<std::size_t> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;

  std::ostringstream out;
  out << "ps,dist,wpb,cycles,rank\n";
  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    const TuneEntry& e = trace.entries[i];
    out << e.cfg.ps << ',' << e.cfg.dist << ',' << e.cfg.wpb << ','
        << e.cycles << ',' << rank[i] << '\n';
  }
  return out.str();
}

}  // namespace pipeshard
