// Copyright 2026 The GamRag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gamrag/adapters.hpp"
#include "gamrag/doubles.hpp"
#include "gamrag/memory.hpp"
#include "gamrag/retrieval.hpp"
#include "json.hpp"

namespace gamrag::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitAdapter = 3;
inline constexpr int kExitSnapshot = 4;
inline constexpr int kExitLabels = 5;

// Raised for CLI-level mismatches that have no library error code.
struct ExitError {
  int code;
  std::string message;
};

int exit_code_for(Errc code);

struct RunConfig {
  std::string corpus;
  std::string graph;
  std::string memory;
  std::string memory_out;
  std::string dataset;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::size_t dim = 64;
  RetrievalConfig retrieval;
  UpdateConfig update;
  std::string adapters = "doubles";           // doubles | http
  std::vector<std::string> http_functions;    // per-function overrides over doubles
  std::string sufficiency = "oracle";         // oracle | yes | no
  bool include_timing = false;

  nlohmann::json to_json() const;
  std::string hash() const;  // hex FNV-1a of the canonical JSON
};

// Offline doubles, optionally with HTTP-backed functions, for an embedding
// dimension. `gold` feeds the oracle judges.
AdapterRegistry make_registry(const RunConfig& config, std::size_t dim,
                              const doubles::GoldTable& gold);

// Parses argv and dispatches. Returns the process exit code.
int run(int argc, char** argv);

}  // namespace gamrag::cli
