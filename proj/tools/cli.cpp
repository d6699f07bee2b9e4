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

#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pipeshard/errors.hpp"
#include "pipeshard/graph.hpp"
#include "pipeshard/placement.hpp"
#include "pipeshard/sim.hpp"
#include "pipeshard/tuner.hpp"
#include "pipeshard/workload.hpp"

namespace pipeshard {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadSpec = 1;
constexpr int kExitBadInput = 2;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

CsrGraph load_graph(const RunSpec& spec) {
  if (!spec.graph_path.empty()) {
    std::ifstream in(spec.graph_path,
                     ends_with(spec.graph_path, ".csr") ? std::ios::binary
                                                        : std::ios::in);
    if (!in)
      throw ParseError("cannot open graph file '" + spec.graph_path + "'", 0);
    return ends_with(spec.graph_path, ".csr") ? load_csr(in)
                                              : load_edge_list(in);
  }

  // kind:N:avgDeg
  std::istringstream ss(spec.synthetic);
  std::string kind_name, n_str, deg_str;
  if (!std::getline(ss, kind_name, ':') || !std::getline(ss, n_str, ':') ||
      !std::getline(ss, deg_str))
    throw InputError("--synthetic expects kind:N:avgDeg, got '" +
                     spec.synthetic + "'");
  SyntheticKind kind;
  if (kind_name == "uniform")
    kind = SyntheticKind::uniform;
  else if (kind_name == "powerlaw")
    kind = SyntheticKind::powerlaw;
  else
    throw InputError("unknown synthetic kind '" + kind_name + "'");
  return gen_synthetic(kind, std::stoull(n_str), std::stod(deg_str),
                       spec.seed);
}

PlacementMode placement_of(const RunSpec& spec) {
  if (spec.placement == "equal-nodes") return PlacementMode::equal_nodes;
  if (spec.placement == "follow-split") return PlacementMode::follow_split;
  throw InputError("unknown placement mode '" + spec.placement + "'");
}

ScheduleMode schedule_of(const RunSpec& spec) {
  ScheduleMode mode;
  if (spec.mode == "sync")
    mode.remote = RemoteMode::sync;
  else if (spec.mode == "async")
    mode.remote = RemoteMode::async;
  else
    throw InputError("unknown mode '" + spec.mode + "' (sync|async)");
  return mode;
}

BaselineKind baseline_of(const std::string& name) {
  if (name == "no_np") return BaselineKind::no_np;
  if (name == "no_interleave") return BaselineKind::no_interleave;
  if (name == "phase_separated") return BaselineKind::phase_separated;
  if (name == "paged_remote") return BaselineKind::paged_remote;
  throw InputError("unknown baseline '" + name + "'");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw InputError("failed writing output file '" + path + "'");
}

/// Runs every GPU's plan under a baseline kind and aggregates like
/// multi_gpu_run does.
MultiGpuReport run_baseline_all_gpus(const CsrGraph& g, const RunSpec& spec,
                                     const HardwareProfile& hw,
                                     BaselineKind kind, bool capture_trace) {
  const WorkloadSplit split = split_by_edges(g, spec.gpus);
  const NePlacement ne =
      plan_ne_placement(g, spec.gpus, placement_of(spec), spec.dim, &split);

  MultiGpuReport r;
  r.barrier_cycles = hw.barrier_cycles;
  for (std::uint32_t gpu = 0; gpu < spec.gpus; ++gpu) {
    const LocalRemoteSplit lr = split_local_remote(g, split, ne, gpu);
    SimReport rep =
        simulate_baseline(lr, hw, spec.dim, spec.cfg, kind, capture_trace);
    r.max_gpu_cycles = std::max(r.max_gpu_cycles, rep.total_cycles);
    r.remote_bytes += rep.remote_bytes;
    r.mean_occupancy += rep.achieved_occupancy;
    r.mean_utilization += rep.sm_utilization;
    r.per_gpu.push_back(std::move(rep));
  }
  r.total_cycles = r.max_gpu_cycles + r.barrier_cycles;
  r.mean_occupancy /= spec.gpus;
  r.mean_utilization /= spec.gpus;
  return r;
}

MultiGpuReport run_spec(const CsrGraph& g, const RunSpec& spec,
                        const HardwareProfile& hw, bool capture_trace) {
  if (!spec.baseline.empty())
    return run_baseline_all_gpus(g, spec, hw, baseline_of(spec.baseline),
                                 capture_trace);
  return multi_gpu_run(g, spec.gpus, spec.cfg, hw, spec.dim, schedule_of(spec),
                       placement_of(spec), capture_trace);
}

std::string multi_gpu_trace_csv(const MultiGpuReport& r, std::uint64_t seed) {
  static constexpr const char* kStageNames[] = {"LR", "LL", "AC"};
  std::ostringstream out;
  out << "# seed=" << seed << "\n";
  out << "gpu,cycle,sm,warp,stage,event\n";
  for (std::size_t gpu = 0; gpu < r.per_gpu.size(); ++gpu)
    for (const TraceEvent& ev : r.per_gpu[gpu].trace)
      out << gpu << ',' << ev.cycle << ',' << ev.sm << ',' << ev.warp << ','
          << kStageNames[static_cast<int>(ev.stage)] << ','
          << (ev.begin ? "begin" : "end") << '\n';
  return out.str();
}

int cmd_partition(const RunSpec& spec) {
  const CsrGraph g = load_graph(spec);
  const HardwareProfile hw = resolve_profile(spec.profile);
  const WorkloadSplit split = split_by_edges(g, spec.gpus);
  const NePlacement ne =
      plan_ne_placement(g, spec.gpus, placement_of(spec), spec.dim, &split);
  const FootprintReport fp = memory_footprint(g, ne, split, hw);

  nlohmann::json per_gpu = nlohmann::json::array();
  std::cout << "gpu  nodes          edges          neBytes        gpBytes\n";
  for (std::uint32_t i = 0; i < spec.gpus; ++i) {
    const NodeRange& c = split.chunk_ranges[i];
    const std::uint64_t edges = split.chunk_edges(g, i);
    per_gpu.push_back({{"gpu", i},
                       {"nodes", c.size()},
                       {"edges", edges},
                       {"neBytes", fp.per_gpu[i].ne_bytes},
                       {"gpBytes", fp.per_gpu[i].gp_bytes}});
    std::cout << std::left << std::setw(5) << i << std::setw(15) << c.size()
              << std::setw(15) << edges << std::setw(15)
              << fp.per_gpu[i].ne_bytes << fp.per_gpu[i].gp_bytes << "\n";
  }
  std::cout << "fits device memory: " << (fp.fits ? "yes" : "no") << "\n";

  nlohmann::json j{{"seed", spec.seed},
                   {"graph", {{"numNodes", g.num_nodes},
                              {"numEdges", g.num_edges()}}},
                   {"split", split},
                   {"placement", ne},
                   {"footprint", {{"perGpu", std::move(per_gpu)},
                                  {"fits", fp.fits},
                                  {"deviceMemBytes", fp.device_mem_bytes}}}};
  if (!spec.out_path.empty()) write_file(spec.out_path, j.dump(2) + "\n");

  if (!spec.save_csr_path.empty()) {
    std::ofstream out(spec.save_csr_path, std::ios::binary);
    if (!out)
      throw InputError("cannot open output file '" + spec.save_csr_path + "'");
    save_csr(g, out);
  }
  return kExitOk;
}

int cmd_simulate(const RunSpec& spec) {
  const CsrGraph g = load_graph(spec);
  const HardwareProfile hw = resolve_profile(spec.profile);
  const bool want_trace = !spec.trace_path.empty();
  const MultiGpuReport r = run_spec(g, spec, hw, want_trace);

  nlohmann::json j = report_to_json(r);
  j["seed"] = spec.seed;
  j["cfg"] = spec.cfg;
  j["dim"] = spec.dim;
  j["gpusRequested"] = spec.gpus;
  j["mode"] = spec.baseline.empty() ? spec.mode : spec.mode + "+baseline";
  if (!spec.baseline.empty()) j["baseline"] = spec.baseline;

  std::cout << "total cycles: " << r.total_cycles
            << " (max gpu " << r.max_gpu_cycles << " + barrier "
            << r.barrier_cycles << ")\n";
  if (!spec.out_path.empty()) write_file(spec.out_path, j.dump(2) + "\n");
  if (want_trace) write_file(spec.trace_path, multi_gpu_trace_csv(r, spec.seed));
  return kExitOk;
}

int cmd_tune(const RunSpec& spec) {
  const CsrGraph g = load_graph(spec);
  const HardwareProfile hw = resolve_profile(spec.profile);
  const ScheduleMode mode = schedule_of(spec);
  const PlacementMode placement = placement_of(spec);

  SimulateFn measure = [&](const KernelConfig& cfg) {
    return multi_gpu_run(g, spec.gpus, cfg, hw, spec.dim, mode, placement)
        .total_cycles;
  };
  const TuneTrace trace = optimize(measure, hw, spec.dim);

  const std::uint64_t base_cycles = trace.entries.front().cycles;
  const double reduction =
      base_cycles == 0
          ? 0.0
          : 100.0 * (1.0 - static_cast<double>(trace.best_cycles) /
                               static_cast<double>(base_cycles));
  std::cout << "best config: ps=" << trace.best.ps
            << " dist=" << trace.best.dist << " wpb=" << trace.best.wpb
            << "\ncycles: " << trace.best_cycles << " (vs "
            << base_cycles << " at ps=1 dist=1 wpb=1, "
            << std::fixed << std::setprecision(1) << reduction
            << "% lower)\niterations: " << trace.iterations() << "\n";

  if (!spec.out_path.empty())
    write_file(spec.out_path,
               "# seed=" + std::to_string(spec.seed) + "\n" +
                   trace_to_csv(trace));
  return kExitOk;
}

int cmd_compare(const RunSpec& spec) {
  const CsrGraph g = load_graph(spec);
  const HardwareProfile hw = resolve_profile(spec.profile);

  struct Row {
    std::string name;
    MultiGpuReport report;
  };
  std::vector<Row> rows;
  rows.push_back({"mgg", run_spec(g, spec, hw, false)});
  for (BaselineKind kind :
       {BaselineKind::no_np, BaselineKind::no_interleave,
        BaselineKind::phase_separated, BaselineKind::paged_remote}) {
    static constexpr const char* kNames[] = {"no_np", "no_interleave",
                                             "phase_separated", "paged_remote"};
    rows.push_back({kNames[static_cast<int>(kind)],
                    run_baseline_all_gpus(g, spec, hw, kind, false)});
  }

  const double mgg_cycles = static_cast<double>(rows.front().report.total_cycles);
  std::ostringstream csv;
  csv << "# seed=" << spec.seed << "\n";
  csv << "mode,cycles,occupancy,smUtilization,remoteBytes,ratioVsMgg\n";
  csv << std::fixed << std::setprecision(6);
  for (const Row& row : rows) {
    const MultiGpuReport& r = row.report;
    const double ratio =
        mgg_cycles == 0 ? 0.0 : static_cast<double>(r.total_cycles) / mgg_cycles;
    csv << row.name << ',' << r.total_cycles << ',' << r.mean_occupancy << ','
        << r.mean_utilization << ',' << r.remote_bytes << ',' << ratio << '\n';
  }

  std::cout << csv.str();
  if (!spec.out_path.empty()) write_file(spec.out_path, csv.str());
  return kExitOk;
}

void add_common_options(CLI::App* sub, RunSpec& spec, bool with_cfg) {
  auto* graph = sub->add_option("--graph", spec.graph_path,
                                "edge-list file, or binary dump when *.csr");
  auto* synth = sub->add_option("--synthetic", spec.synthetic,
                                "synthetic graph kind:N:avgDeg");
  graph->excludes(synth);
  synth->excludes(graph);
  sub->add_option("--gpus", spec.gpus, "number of modeled GPUs")
      ->check(CLI::Range(1u, 1024u));
  sub->add_option("--profile", spec.profile,
                  "hardware profile name or JSON path (a100|v100|desk)");
  sub->add_option("--dim", spec.dim, "embedding dimension D")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20));
  sub->add_option("--placement", spec.placement,
                  "embedding shard layout: follow-split|equal-nodes");
  sub->add_option("--seed", spec.seed, "RNG seed, echoed into all outputs");
  sub->add_option("--out", spec.out_path, "output file (JSON or CSV)");
  if (with_cfg) {
    sub->add_option("--ps", spec.cfg.ps, "neighbors per partition [1,32]");
    sub->add_option("--dist", spec.cfg.dist, "interleaving distance [1,16]");
    sub->add_option("--wpb", spec.cfg.wpb, "warps per block [1,16]");
  }
  sub->final_callback([&spec, sub]() {
    if (spec.graph_path.empty() && spec.synthetic.empty())
      throw CLI::ValidationError(sub->get_name(),
                                 "one of --graph/--synthetic is required");
  });
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  RunSpec spec;
  CLI::App app{"multi-GPU GNN aggregation pipeline modeling toolkit"};
  app.require_subcommand(1);

  CLI::App* partition =
      app.add_subcommand("partition", "edge-balanced split and placement plan");
  add_common_options(partition, spec, false);
  partition->add_option("--save-csr", spec.save_csr_path,
                        "also dump the graph in binary form");

  CLI::App* simulate =
      app.add_subcommand("simulate", "run the pipeline simulator");
  add_common_options(simulate, spec, true);
  simulate->add_option("--mode", spec.mode, "remote scheduling: sync|async");
  simulate->add_option(
      "--baseline", spec.baseline,
      "ablation: no_np|no_interleave|phase_separated|paged_remote");
  simulate->add_option("--trace", spec.trace_path, "event trace CSV path");

  CLI::App* tune =
      app.add_subcommand("tune", "heuristic search over (ps, dist, wpb)");
  add_common_options(tune, spec, false);
  tune->add_option("--mode", spec.mode, "remote scheduling: sync|async");

  CLI::App* compare =
      app.add_subcommand("compare", "ablation table across schedule modes");
  add_common_options(compare, spec, true);
  compare->add_option("--mode", spec.mode, "remote scheduling: sync|async");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadSpec;
  }

  try {
    if (partition->parsed()) return cmd_partition(spec);
    if (simulate->parsed()) return cmd_simulate(spec);
    if (tune->parsed()) return cmd_tune(spec);
    return cmd_compare(spec);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadSpec;
  }
}

}  // namespace pipeshard
