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

#include "pipeshard/costmodel.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pipeshard/errors.hpp"

namespace pipeshard {

std::uint64_t wpw(const KernelConfig& cfg, std::uint64_t dim) {
  return 2ull * cfg.ps * dim * cfg.dist;
}

std::uint64_t smem(const KernelConfig& cfg, std::uint64_t dim) {
  constexpr std::uint64_t kIntBytes = 4;
  constexpr std::uint64_t kFloatBytes = 4;
  return static_cast<std::uint64_t>(cfg.ps) * cfg.wpb * kIntBytes +
         2ull * cfg.wpb * dim * kFloatBytes;
}

LaunchGeometry launch_geometry(std::uint64_t n_local_parts,
                               std::uint64_t n_remote_parts,
                               const KernelConfig& cfg,
                               const HardwareProfile& hw) {
  LaunchGeometry g;
  const std::uint64_t longest = std::max(n_local_parts, n_remote_parts);
  g.num_warps = (longest + cfg.dist - 1) / cfg.dist;
  g.num_blocks = (g.num_warps + cfg.wpb - 1) / cfg.wpb;
  g.blocks_per_sm =
      static_cast<double>(g.num_blocks) / static_cast<double>(hw.num_sms);
  return g;
}

std::vector<Violation> validate(const KernelConfig& cfg,
                                const HardwareProfile& hw, std::uint64_t dim) {
  std::vector<Violation> v;
  if (cfg.ps < 1 || cfg.ps > kMaxPs)
    v.push_back({"ps range", "ps=" + std::to_string(cfg.ps) +
                                 " outside [1," + std::to_string(kMaxPs) + "]"});
  if (cfg.dist < 1 || cfg.dist > kMaxDist)
    v.push_back({"dist range", "dist=" + std::to_string(cfg.dist) +
                                   " outside [1," + std::to_string(kMaxDist) +
                                   "]"});
  if (cfg.wpb < 1 || cfg.wpb > kMaxWpb)
    v.push_back({"wpb range", "wpb=" + std::to_string(cfg.wpb) +
                                  " outside [1," + std::to_string(kMaxWpb) +
                                  "]"});
  if (cfg.wpb > hw.max_warps_per_sm)
    v.push_back({"wpb capacity",
                 "wpb=" + std::to_string(cfg.wpb) + " exceeds " +
                     std::to_string(hw.max_warps_per_sm) + " warp slots"});
  if (cfg.ps >= 1 && cfg.wpb >= 1) {
    const std::uint64_t need = smem(cfg, dim);
    if (need > hw.smem_per_sm_bytes)
      v.push_back({"smem", std::to_string(need) + " bytes per block > " +
                               std::to_string(hw.smem_per_sm_bytes) +
                               " bytes per SM"});
  }
  return v;
}

HardwareProfile builtin_profile(const std::string& name) {
  HardwareProfile hw;
  if (name == "a100") {
    hw.name = "a100";
    hw.num_sms = 108;
    hw.max_warps_per_sm = 64;
    hw.smem_per_sm_bytes = 164 * 1024;
    hw.device_mem_bytes = 40ull << 30;
  } else if (name == "v100") {
    hw.name = "v100";
    hw.num_sms = 80;
    hw.max_warps_per_sm = 64;
    hw.smem_per_sm_bytes = 96 * 1024;
    hw.device_mem_bytes = 16ull << 30;
  } else if (name == "desk") {
    // Small modeled GPU so that desk-scale graphs actually contend for SMs.
    hw.name = "desk";
    hw.num_sms = 8;
    hw.max_warps_per_sm = 2;
    hw.smem_per_sm_bytes = 96 * 1024;
    hw.device_mem_bytes = 1ull << 30;
  } else {
    throw ConfigError("unknown hardware profile '" + name + "'");
  }
  return hw;
}

HardwareProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
    return j.get<HardwareProfile>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("profile '" + path + "': " + e.what(), 0);
  }
}

HardwareProfile resolve_profile(const std::string& name_or_path,
                                const std::string& profile_dir) {
  namespace fs = std::filesystem;
  if (fs::exists(name_or_path) && fs::is_regular_file(name_or_path))
    return load_profile(name_or_path);

  std::string dir = profile_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("PIPESHARD_PROFILE_DIR")) dir = env;
  }
  if (!dir.empty()) {
    fs::path candidate = fs::path(dir) / (name_or_path + ".json");
    if (fs::exists(candidate)) return load_profile(candidate.string());
  }
  return builtin_profile(name_or_path);
}

void to_json(nlohmann::json& j, const HardwareProfile& hw) {
  j = nlohmann::json{{"name", hw.name},
                     {"numSMs", hw.num_sms},
                     {"maxWarpsPerSM", hw.max_warps_per_sm},
                     {"smemPerSMBytes", hw.smem_per_sm_bytes},
                     {"deviceMemBytes", hw.device_mem_bytes},
                     {"pageBytes", hw.page_bytes},
                     {"barrierCycles", hw.barrier_cycles},
                     {"latencies",
                      {{"remoteGetBase", hw.lat.remote_get_base},
                       {"localLoadBase", hw.lat.local_load_base},
                       {"perElemRemote", hw.lat.per_elem_remote},
                       {"perElemLocal", hw.lat.per_elem_local},
                       {"perElemCompute", hw.lat.per_elem_compute}}}};
}

void from_json(const nlohmann::json& j, HardwareProfile& hw) {
  hw = HardwareProfile{};
  j.at("name").get_to(hw.name);
  j.at("numSMs").get_to(hw.num_sms);
  j.at("maxWarpsPerSM").get_to(hw.max_warps_per_sm);
  j.at("smemPerSMBytes").get_to(hw.smem_per_sm_bytes);
  j.at("deviceMemBytes").get_to(hw.device_mem_bytes);
  if (j.contains("pageBytes")) j.at("pageBytes").get_to(hw.page_bytes);
  if (j.contains("barrierCycles"))
    j.at("barrierCycles").get_to(hw.barrier_cycles);
  if (j.contains("latencies")) {
    const auto& l = j.at("latencies");
    l.at("remoteGetBase").get_to(hw.lat.remote_get_base);
    l.at("localLoadBase").get_to(hw.lat.local_load_base);
    l.at("perElemRemote").get_to(hw.lat.per_elem_remote);
    l.at("perElemLocal").get_to(hw.lat.per_elem_local);
    l.at("perElemCompute").get_to(hw.lat.per_elem_compute);
  }
  if (hw.num_sms < 1 || hw.max_warps_per_sm < 1)
    throw ParseError("profile: counts must be >= 1", 0);
}

void to_json(nlohmann::json& j, const KernelConfig& cfg) {
  j = nlohmann::json{{"ps", cfg.ps}, {"dist", cfg.dist}, {"wpb", cfg.wpb}};
}

void from_json(const nlohmann::json& j, KernelConfig& cfg) {
  j.at("ps").get_to(cfg.ps);
  j.at("dist").get_to(cfg.dist);
  j.at("wpb").get_to(cfg.wpb);
}

}  // namespace pipeshard
