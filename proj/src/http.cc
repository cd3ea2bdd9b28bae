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

#include "perturbench/http.h"

#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "perturbench/errors.h"

namespace perturbench::http {

Url ParseUrl(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("URL without scheme: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw std::invalid_argument("unsupported URL scheme: " + url);
  }
  const std::size_t host_begin = scheme_end + 3;
  const std::size_t path_begin = url.find('/', host_begin);
  Url out;
  if (path_begin == std::string::npos) {
    out.scheme_host_port = url;
    out.path = "/";
  } else {
    out.scheme_host_port = url.substr(0, path_begin);
    out.path = url.substr(path_begin);
  }
  if (out.scheme_host_port.size() == host_begin) {
    throw std::invalid_argument("URL without host: " + url);
  }
  return out;
}

std::string ApiKeyFromEnv() {
  const char* v = std::getenv(kApiKeyEnv);
  return v == nullptr ? std::string() : std::string(v);
}

nlohmann::json PostJson(const std::string& url, const nlohmann::json& body,
                        const std::string& bearer_token,
                        const RetryPolicy& policy) {
  const Url parsed = ParseUrl(url);
  httplib::Client client(parsed.scheme_host_port);
  client.set_connection_timeout(policy.timeout);
  client.set_read_timeout(policy.timeout);
  client.set_write_timeout(policy.timeout);
  httplib::Headers headers;
  if (!bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + bearer_token);
  }
  const std::string payload = body.dump();

  std::string history;
  auto backoff = policy.initial_backoff;
  for (int attempt = 1; attempt <= policy.attempts; ++attempt) {
    auto res = client.Post(parsed.path, headers, payload, "application/json");
    std::string failure;
    if (!res) {
      failure = "transport: " + httplib::to_string(res.error());
    } else if (res->status == 429 || res->status >= 500) {
      failure = "HTTP " + std::to_string(res->status);
    } else if (res->status < 200 || res->status >= 300) {
      throw ProtocolError("HTTP " + std::to_string(res->status) + " from " +
                          url + ": " + res->body.substr(0, 200));
    } else {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError("malformed JSON from " + url + ": " + e.what());
      }
    }
    history += (history.empty() ? "" : "; ") + std::string("attempt ") +
               std::to_string(attempt) + ": " + failure;
    if (attempt < policy.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw TransportError("request to " + url + " failed after " +
                       std::to_string(policy.attempts) + " attempts (" +
                       history + ")");
}

}  // namespace perturbench::http
