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

#ifndef PERTURBENCH_HTTP_H_
#define PERTURBENCH_HTTP_H_

#include <chrono>
#include <string>

#include "json.hpp"

namespace perturbench::http {

inline constexpr const char* kApiKeyEnv = "PERTURBENCH_API_KEY";

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};  // doubled per retry
  std::chrono::seconds timeout{60};
};

struct Url {
  std::string scheme_host_port;  // "https://api.example.com:443"
  std::string path;              // "/v1/embeddings"
};

// Throws std::invalid_argument for anything but http(s)://host[:port][/path].
Url ParseUrl(const std::string& url);

// Bearer token from PERTURBENCH_API_KEY, empty if unset.
std::string ApiKeyFromEnv();

// POSTs `body` as JSON and parses the JSON reply. Transport failures, 429 and
// 5xx responses are retried with exponential backoff; exhaustion throws
// TransportError naming every attempt. Other non-2xx statuses and unparsable
// bodies throw ProtocolError.
nlohmann::json PostJson(const std::string& url, const nlohmann::json& body,
                        const std::string& bearer_token,
                        const RetryPolicy& policy = {});

}  // namespace perturbench::http

#endif  // PERTURBENCH_HTTP_H_
