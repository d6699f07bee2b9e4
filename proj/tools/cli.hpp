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
#include <string>

#include "pipeshard/costmodel.hpp"

namespace pipeshard {

/// One batch invocation: exactly one graph source, and either a fixed config
/// or a tune request.
struct RunSpec {
  std::string graph_path;   // edge-list text, or binary dump when *.csr
  std::string synthetic;    // "kind:N:avgDeg"
  std::uint32_t gpus = 1;
  std::string profile = "a100";
  std::uint64_t dim = 16;
  KernelConfig cfg;
  std::string mode = "async";            // sync | async
  std::string baseline;                  // empty, or an ablation kind
  std::string placement = "follow-split";
  std::string trace_path;
  std::string save_csr_path;
  std::uint64_t seed = 0;
  std::string out_path;
};

/// Exit codes: 0 all requested outputs written, 1 invalid spec/config,
/// 2 unreadable or malformed input.
int run_cli(int argc, const char* const* argv);

}  // namespace pipeshard
