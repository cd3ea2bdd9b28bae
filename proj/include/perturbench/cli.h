// Copyright 2026 The Perturbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERTURBENCH_CLI_H_
#define PERTURBENCH_CLI_H_

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "perturbench/embed.h"
#include "json.hpp"

namespace perturbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitInternalError = 2;

inline constexpr const char* kProfilesEnv = "PERTURBENCH_PROFILES";
inline constexpr const char* kJflegDirEnv = "PERTURBENCH_JFLEG_DIR";

// One named endpoint in a profiles file:
//
//   [small-embed]
//   providerId = openai
//   endpointUrl = https://api.example.com/v1/embeddings
//   modelId = text-embedding-3-small
//   dim = 1536
//   contextWindow = 8191
//   maxBatch = 64
//
// Lines starting with '#' or ';' are comments.
struct EndpointProfile {
  std::string name;
  std::string provider_id;
  std::string endpoint_url;
  std::string model_id;
  std::size_t dim = 1024;
  std::size_t context_window = 8191;
  std::size_t max_batch = 64;

  embed::ProviderSpec ToProviderSpec() const;
};

// Throws ParseError on malformed lines, unknown keys or a missing endpoint.
std::map<std::string, EndpointProfile> ParseProfiles(std::string_view contents);

// {commandLine, command, config, seed, toolkitVersion, startedAt, finishedAt}
struct RunManifest {
  std::vector<std::string> command_line;
  std::string command;
  nlohmann::json config;
  std::optional<std::uint64_t> seed;
  std::string started_at;
  std::optional<std::string> finished_at;

  nlohmann::json ToJson() const;
  static RunManifest FromJson(const nlohmann::json& j);
};

// Runs one command line (without the program name). Output goes to `out`,
// diagnostics and usage to `err`. Returns 0 on success, 1 on user error and
// 2 on internal error.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace perturbench::cli

#endif  // PERTURBENCH_CLI_H_
