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

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "httplib.h"
#include "perturbench/embed.h"
#include "perturbench/errors.h"
#include "perturbench/harness.h"

namespace perturbench::http {
namespace {

TEST(ParseUrlTest, SplitsHostAndPath) {
  const Url u = ParseUrl("http://localhost:8080/v1/embeddings");
  EXPECT_EQ(u.scheme_host_port, "http://localhost:8080");
  EXPECT_EQ(u.path, "/v1/embeddings");
  EXPECT_EQ(ParseUrl("https://api.example.com").path, "/");
  EXPECT_THROW(ParseUrl("ftp://x/y"), std::invalid_argument);
  EXPECT_THROW(ParseUrl("localhost:80"), std::invalid_argument);
}

// Serves scripted replies on a local port.
class FakeEndpoint {
 public:
  FakeEndpoint() {
    server_.Post("/ok", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      res.set_content(nlohmann::json{{"echo", body}, {"auth", req.get_header_value("Authorization")}}
                          .dump(),
                      "application/json");
    });
    server_.Post("/flaky", [this](const httplib::Request&, httplib::Response& res) {
      if (++flaky_calls_ < 3) {
        res.status = 503;
        return;
      }
      res.set_content("{\"ok\":true}", "application/json");
    });
    server_.Post("/always503", [this](const httplib::Request&, httplib::Response& res) {
      ++down_calls_;
      res.status = 503;
    });
    server_.Post("/bad", [](const httplib::Request&, httplib::Response& res) {
      res.status = 400;
      res.set_content("nope", "text/plain");
    });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{not json", "application/json");
    });
    server_.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      nlohmann::json data = nlohmann::json::array();
      const auto& input = body.at("input");
      for (std::size_t i = 0; i < input.size(); ++i) {
        const double len = static_cast<double>(input[i].get<std::string>().size());
        data.push_back({{"index", i}, {"embedding", {len, 1.0, 0.0}}});
      }
      res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
    });
    server_.Post("/chat", [](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body);
      const std::string prompt = body.at("messages")[0].at("content");
      res.set_content(
          nlohmann::json{{"choices", {{{"message", {{"content", "Output: fixed"}}}}}}}.dump(),
          "application/json");
      (void)prompt;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeEndpoint() {
    server_.stop();
    thread_.join();
  }
  std::string Url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }
  int flaky_calls() const { return flaky_calls_; }
  int down_calls() const { return down_calls_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> flaky_calls_{0};
  std::atomic<int> down_calls_{0};
};

RetryPolicy Fast(int attempts) {
  RetryPolicy p;
  p.attempts = attempts;
  p.initial_backoff = std::chrono::milliseconds(1);
  p.timeout = std::chrono::seconds(5);
  return p;
}

TEST(PostJsonTest, SendsBodyAndBearer) {
  FakeEndpoint ep;
  const auto reply = PostJson(ep.Url("/ok"), {{"x", 1}}, "secret", Fast(1));
  EXPECT_EQ(reply.at("echo").at("x"), 1);
  EXPECT_EQ(reply.at("auth"), "Bearer secret");
}

TEST(PostJsonTest, RetriesServerErrors) {
  FakeEndpoint ep;
  EXPECT_EQ(PostJson(ep.Url("/flaky"), {}, "", Fast(3)).at("ok"), true);
  EXPECT_EQ(ep.flaky_calls(), 3);
}

TEST(PostJsonTest, ExhaustionNamesAttempts) {
  FakeEndpoint ep;
  try {
    PostJson(ep.Url("/always503"), {}, "", Fast(2));
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_NE(std::string(e.what()).find("attempt 2"), std::string::npos);
  }
  EXPECT_EQ(ep.down_calls(), 2);
}

TEST(PostJsonTest, ProtocolErrorsAreNotRetried) {
  FakeEndpoint ep;
  EXPECT_THROW(PostJson(ep.Url("/bad"), {}, "", Fast(3)), ProtocolError);
  EXPECT_THROW(PostJson(ep.Url("/garbage"), {}, "", Fast(3)), ProtocolError);
}

TEST(PostJsonTest, UnreachableHostIsTransportError) {
  std::string url;
  {
    FakeEndpoint ep;
    url = ep.Url("/ok");
  }
  EXPECT_THROW(PostJson(url, {}, "", Fast(2)), TransportError);
}

TEST(HttpEmbeddingProviderTest, EmbedsThroughEndpoint) {
  FakeEndpoint ep;
  embed::ProviderSpec spec;
  spec.provider_id = "fake";
  spec.model_id = "m";
  spec.endpoint_url = ep.Url("/embed");
  spec.dim = 3;
  spec.max_batch = 2;
  embed::Embedder embedder(
      std::make_unique<embed::HttpEmbeddingProvider>(spec, "", Fast(1)));
  const auto r = embedder.EmbedBatch({"a", "bbb", "cc"});
  ASSERT_EQ(r.vectors.size(), 3u);
  EXPECT_EQ(r.vectors[1].components, (std::vector<double>{3, 1, 0}));
  EXPECT_EQ(r.vectors[2].components, (std::vector<double>{2, 1, 0}));
}

TEST(HttpChatProviderTest, CompletesThroughEndpoint) {
  FakeEndpoint ep;
  harness::HttpChatProvider chat("fake", ep.Url("/chat"), "m", "", Fast(1));
  const auto results = harness::RunLec(harness::ItemsFromSources({"she go home"}), chat);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].hypothesis, "fixed");
  EXPECT_EQ(results[0].provider, "fake");
}

}  // namespace
}  // namespace perturbench::http
