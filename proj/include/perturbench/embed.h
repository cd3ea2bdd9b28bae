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

#ifndef PERTURBENCH_EMBED_H_
#define PERTURBENCH_EMBED_H_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "perturbench/http.h"

namespace perturbench::embed {

struct EmbeddingVector {
  std::vector<double> components;
  std::string provider_tag;

  std::size_t dim() const { return components.size(); }
};

// Cosine similarity: dot(x, y) / (|x| |y|).
// Throws std::invalid_argument on dimension mismatch and UndefinedSimilarity
// when either vector has zero norm.
double Cosine(std::span<const double> x, std::span<const double> y);
double Cosine(const EmbeddingVector& x, const EmbeddingVector& y);

// Character 3-gram hashing embedder: every 3-gram (code points) of the
// lowercased text increments component Fnv1a64(gram) % dim, then the vector
// is L2-normalised. Texts shorter than three code points contribute the
// whole text as a single gram. dim must be >= 16.
EmbeddingVector LocalEmbed(std::string_view text, std::size_t dim);

inline constexpr std::string_view kLocalProviderId = "local";

struct ProviderSpec {
  std::string provider_id;
  std::string model_id;
  std::optional<std::string> endpoint_url;
  std::size_t dim = 1024;
  std::size_t max_batch = 64;
  std::size_t context_window = 8191;  // in tokens

  void Validate() const;
  static ProviderSpec Local(std::size_t dim = 1024);
};

struct SimilarityRecord {
  std::string pair_id;
  double similarity = 0.0;
  std::string provider;
  std::string combo_label;
};

// Approximate token count used for context-window checks: whitespace
// tokens * 1.3, rounded up.
std::size_t ApproxTokenCount(std::string_view text);

// Keeps the longest whitespace-token prefix whose approximate count fits in
// `context_window`. Sets *truncated when anything was dropped.
std::string TruncateToContext(std::string_view text, std::size_t context_window,
                              bool* truncated);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const ProviderSpec& spec() const = 0;
  // One vector per input, in order. Inputs never exceed spec().max_batch.
  virtual std::vector<EmbeddingVector> EmbedChunk(
      std::span<const std::string> texts) = 0;
};

class LocalEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit LocalEmbeddingProvider(ProviderSpec spec);
  const ProviderSpec& spec() const override { return spec_; }
  std::vector<EmbeddingVector> EmbedChunk(
      std::span<const std::string> texts) override;

 private:
  ProviderSpec spec_;
};

// Remote endpoint. Request: {"model": model_id, "input": [texts]}. Accepted
// responses: a bare array of vectors, {"embeddings": [...]}, or
// {"data": [{"embedding": [...], "index": i}, ...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(ProviderSpec spec, std::string api_key,
                        http::RetryPolicy retry = {});
  const ProviderSpec& spec() const override { return spec_; }
  std::vector<EmbeddingVector> EmbedChunk(
      std::span<const std::string> texts) override;

 private:
  ProviderSpec spec_;
  std::string api_key_;
  http::RetryPolicy retry_;
};

// Parses an embedding endpoint reply. Throws ProtocolError.
std::vector<std::vector<double>> ParseEmbeddingResponse(
    const nlohmann::json& reply, std::size_t expected_count,
    std::size_t expected_dim);

// Single-file persistent cache. Layout: 8-byte magic "PBEMBC\0\0", u32
// version, then records of {u32 key length, key bytes, u32 dim, dim f64},
// little-endian. A file with another magic or version is discarded. A torn
// trailing record is ignored on load.
class EmbeddingCache {
 public:
  static constexpr std::uint32_t kVersion = 1;

  // Opens (or creates) the cache file.
  explicit EmbeddingCache(std::string path);

  std::optional<std::vector<double>> Lookup(const std::string& key) const;
  void Store(const std::string& key, const std::vector<double>& vec);
  std::size_t size() const;
  const std::string& path() const { return path_; }

  static std::string Key(const ProviderSpec& spec, std::string_view text);

 private:
  void Load();

  std::string path_;
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::vector<double>> entries_;
  std::ofstream out_;
};

struct EmbedBatchResult {
  std::vector<EmbeddingVector> vectors;
  std::vector<bool> truncated;
  std::size_t cache_hits = 0;
};

// Batching, truncation and caching in front of a provider.
class Embedder {
 public:
  Embedder(std::unique_ptr<EmbeddingProvider> provider,
           std::shared_ptr<EmbeddingCache> cache = nullptr,
           std::size_t max_in_flight = 4);

  // Throws std::invalid_argument when texts is empty.
  EmbedBatchResult EmbedBatch(const std::vector<std::string>& texts);
  const ProviderSpec& spec() const { return provider_->spec(); }

 private:
  std::unique_ptr<EmbeddingProvider> provider_;
  std::shared_ptr<EmbeddingCache> cache_;
  std::size_t max_in_flight_;
};

// Local provider for provider_id "local", HTTP provider otherwise (the
// endpoint URL is required).
std::unique_ptr<EmbeddingProvider> MakeProvider(const ProviderSpec& spec);

// Convenience wrapper: uncached Embedder over MakeProvider(spec).
EmbedBatchResult EmbedBatch(const std::vector<std::string>& texts,
                            const ProviderSpec& spec);

}  // namespace perturbench::embed

#endif  // PERTURBENCH_EMBED_H_
