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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "pipeshard/costmodel.hpp"
#include "pipeshard/graph.hpp"
#include "pipeshard/placement.hpp"

using namespace pipeshard;
namespace fs = std::filesystem;

namespace {

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"pipeshard"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pipeshard_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
  static inline int counter = 0;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("partition writes a plan that matches the library") {
  TempDir tmp;
  const std::string out = tmp.file("plan.json");
  CHECK(cli({"partition", "--synthetic", "uniform:200:6", "--gpus", "4",
             "--dim", "8", "--out", out}) == 0);

  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["seed"] == 0);

  CsrGraph g = gen_synthetic(SyntheticKind::uniform, 200, 6, 0);
  WorkloadSplit expect = split_by_edges(g, 4);
  WorkloadSplit got = j["split"].get<WorkloadSplit>();
  CHECK(got.split_points == expect.split_points);
  CHECK(j["placement"]["mode"] == "follow-split");
  CHECK(j["footprint"]["fits"].get<bool>());
}

TEST_CASE("partition single gpu covers every edge") {
  TempDir tmp;
  const std::string out = tmp.file("plan.json");
  CHECK(cli({"partition", "--synthetic", "uniform:100:4", "--gpus", "1",
             "--out", out}) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["split"]["splitPoints"].empty());
  CHECK(j["footprint"]["perGpu"][0]["edges"] == 400);
}

TEST_CASE("partition can dump and reload a binary graph") {
  TempDir tmp;
  const std::string csr = tmp.file("graph.csr");
  CHECK(cli({"partition", "--synthetic", "powerlaw:150:5", "--gpus", "2",
             "--save-csr", csr}) == 0);

  const std::string out = tmp.file("plan.json");
  CHECK(cli({"partition", "--graph", csr, "--gpus", "2", "--out", out}) == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CsrGraph g = gen_synthetic(SyntheticKind::powerlaw, 150, 5, 0);
  CHECK(j["graph"]["numEdges"] == g.num_edges());
}

TEST_CASE("malformed edge file exits 2 and names the line") {
  TempDir tmp;
  const std::string graph = tmp.file("bad.txt");
  std::ofstream(graph) << "0 1\nnope nope\n";
  CHECK(cli({"partition", "--graph", graph, "--gpus", "2"}) == 2);

  CHECK(cli({"partition", "--graph", tmp.file("missing.txt"), "--gpus", "2"}) ==
        2);
}

TEST_CASE("invalid specs exit 1") {
  CHECK(cli({"simulate", "--synthetic", "uniform:50:4", "--ps", "33"}) == 1);
  CHECK(cli({"simulate", "--synthetic", "nonsense:50:4"}) == 1);
  CHECK(cli({"simulate", "--synthetic", "uniform:50:4", "--mode", "warp"}) ==
        1);
  CHECK(cli({"simulate", "--synthetic", "uniform:50:4", "--baseline",
             "nothing"}) == 1);
  CHECK(cli({"simulate"}) == 1);  // no graph source
  CHECK(cli({"bogus-subcommand"}) == 1);
  CHECK(cli({"simulate", "--synthetic", "uniform:50:4", "--profile",
             "unknown-gpu"}) == 1);
}

TEST_CASE("simulate is deterministic and honors modes") {
  TempDir tmp;
  const std::string out1 = tmp.file("r1.json"), out2 = tmp.file("r2.json");
  std::vector<std::string> base{"simulate", "--synthetic", "powerlaw:300:6",
                                "--gpus",   "2",           "--dim",
                                "16",       "--ps",        "8",
                                "--dist",   "2",           "--wpb",
                                "2",        "--profile",   "desk"};

  auto with = [&](std::initializer_list<std::string> extra,
                  const std::string& out) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra);
    args.insert(args.end(), {"--out", out});
    return cli(args);
  };

  CHECK(with({}, out1) == 0);
  CHECK(with({}, out2) == 0);
  CHECK(slurp(out1) == slurp(out2));  // byte-identical

  const std::string sync_out = tmp.file("sync.json");
  CHECK(with({"--mode", "sync"}, sync_out) == 0);
  nlohmann::json ja = nlohmann::json::parse(slurp(out1));
  nlohmann::json js = nlohmann::json::parse(slurp(sync_out));
  CHECK(ja["aggregate"]["totalCycles"].get<std::uint64_t>() <=
        js["aggregate"]["totalCycles"].get<std::uint64_t>());

  const std::string np_out = tmp.file("np.json");
  CHECK(with({"--baseline", "no_np"}, np_out) == 0);
  nlohmann::json jn = nlohmann::json::parse(slurp(np_out));
  CHECK(jn["baseline"] == "no_np");
}

TEST_CASE("simulate writes an event trace with seed echo") {
  TempDir tmp;
  const std::string trace = tmp.file("trace.csv");
  CHECK(cli({"simulate", "--synthetic", "uniform:40:4", "--gpus", "2",
             "--dim", "4", "--profile", "desk", "--seed", "7", "--trace",
             trace}) == 0);
  const std::string csv = slurp(trace);
  CHECK(csv.rfind("# seed=7\ngpu,cycle,sm,warp,stage,event\n", 0) == 0);
  CHECK(csv.find(",LL,begin") != std::string::npos);
}

TEST_CASE("tune emits a short trace and a valid best config") {
  TempDir tmp;
  const std::string out = tmp.file("tune.csv");
  CHECK(cli({"tune", "--synthetic", "powerlaw:400:8", "--gpus", "2", "--dim",
             "8", "--profile", "desk", "--out", out}) == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "# seed=0");
  std::getline(csv, line);
  CHECK(line == "ps,dist,wpb,cycles,rank");
  int rows = 0;
  HardwareProfile desk = builtin_profile("desk");
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream row(line);
    std::string ps, dist, wpb;
    std::getline(row, ps, ',');
    std::getline(row, dist, ',');
    std::getline(row, wpb, ',');
    KernelConfig cfg{static_cast<std::uint32_t>(std::stoul(ps)),
                     static_cast<std::uint32_t>(std::stoul(dist)),
                     static_cast<std::uint32_t>(std::stoul(wpb))};
    CHECK(validate(cfg, desk, 8).empty());
  }
  CHECK(rows >= 1);
  CHECK(rows <= 15);
}

TEST_CASE("compare emits one row per mode with mgg ratios") {
  TempDir tmp;
  const std::string out = tmp.file("table.csv");
  CHECK(cli({"compare", "--synthetic", "powerlaw:300:8", "--gpus", "2",
             "--dim", "16", "--ps", "8", "--dist", "1", "--wpb", "2",
             "--profile", "desk", "--out", out}) == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);  // seed comment
  std::getline(csv, line);
  CHECK(line == "mode,cycles,occupancy,smUtilization,remoteBytes,ratioVsMgg");
  std::vector<std::string> modes;
  double mgg_bytes = 0, paged_bytes = 0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string mode, cycles, occ, util, bytes, ratio;
    std::getline(row, mode, ',');
    std::getline(row, cycles, ',');
    std::getline(row, occ, ',');
    std::getline(row, util, ',');
    std::getline(row, bytes, ',');
    std::getline(row, ratio, ',');
    modes.push_back(mode);
    if (mode == "mgg") {
      CHECK(ratio == "1.000000");
      mgg_bytes = std::stod(bytes);
    }
    if (mode == "paged_remote") paged_bytes = std::stod(bytes);
    CHECK(std::stod(ratio) >= 0.99);  // mgg should not lose on this workload
  }
  CHECK(modes == std::vector<std::string>{"mgg", "no_np", "no_interleave",
                                          "phase_separated", "paged_remote"});
  CHECK(paged_bytes >= mgg_bytes);
}

TEST_CASE("local-only graph makes no_interleave match mgg") {
  // One GPU owns everything, so there is no remote work to overlap.
  TempDir tmp;
  const std::string out = tmp.file("table.csv");
  CHECK(cli({"compare", "--synthetic", "uniform:100:6", "--gpus", "1", "--dim",
             "8", "--ps", "8", "--dist", "1", "--wpb", "2", "--profile",
             "desk", "--out", out}) == 0);
  std::istringstream csv(slurp(out));
  std::string line;
  std::uint64_t mgg = 0, ni = 0;
  while (std::getline(csv, line)) {
    if (line.rfind("mgg,", 0) == 0) mgg = std::stoull(line.substr(4));
    if (line.rfind("no_interleave,", 0) == 0)
      ni = std::stoull(line.substr(14));
  }
  REQUIRE(mgg > 0);
  CHECK(ni == mgg);
}

TEST_CASE("profiles resolve through the environment directory") {
  TempDir tmp;
  HardwareProfile hw = builtin_profile("desk");
  hw.name = "enviro";
  hw.num_sms = 3;
  nlohmann::json j = hw;
  std::ofstream(tmp.file("enviro.json")) << j.dump();

  setenv("PIPESHARD_PROFILE_DIR", tmp.path.string().c_str(), 1);
  const std::string out = tmp.file("rep.json");
  CHECK(cli({"simulate", "--synthetic", "uniform:30:2", "--gpus", "1", "--dim",
             "4", "--profile", "enviro", "--out", out}) == 0);
  unsetenv("PIPESHARD_PROFILE_DIR");
  nlohmann::json rep = nlohmann::json::parse(slurp(out));
  CHECK(rep["gpus"][0]["activeSMs"].get<int>() <= 3);
}
