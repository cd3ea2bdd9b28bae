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

#include "perturbench/embed.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <stdexcept>

#include "perturbench/common.h"
#include "perturbench/errors.h"

namespace perturbench::embed {

double Cosine(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("cosine: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  double dot = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  if (xx == 0.0 || yy == 0.0) {
    throw UndefinedSimilarity("cosine similarity of a zero-norm vector");
  }
  const double prod = xx * yy;
  if (std::isnormal(prod)) return dot / std::sqrt(prod);
  return dot / (std::sqrt(xx) * std::sqrt(yy));
}

double Cosine(const EmbeddingVector& x, const EmbeddingVector& y) {
  return Cosine(x.components, y.components);
}

EmbeddingVector LocalEmbed(std::string_view text, std::size_t dim) {
  if (dim < 16) throw std::invalid_argument("local embedder needs dim >= 16");
  EmbeddingVector v;
  v.provider_tag = std::string(kLocalProviderId);
  v.components.assign(dim, 0.0);
  const std::string lower = AsciiLower(text);
  const std::vector<std::size_t> starts = CodepointStarts(lower);
  auto bump = [&](std::string_view gram) {
    v.components[Fnv1a64(gram) % dim] += 1.0;
  };
  if (starts.size() < 3) {
    bump(lower);
  } else {
    for (std::size_t k = 0; k + 2 < starts.size(); ++k) {
      const std::size_t end = k + 3 < starts.size() ? starts[k + 3] : lower.size();
      bump(std::string_view(lower).substr(starts[k], end - starts[k]));
    }
  }
  double norm = 0.0;
  for (double c : v.components) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : v.components) c /= norm;
  return v;
}

void ProviderSpec::Validate() const {
  if (provider_id.empty()) throw std::invalid_argument("provider id is empty");
  if (dim < 1) throw std::invalid_argument("provider dim must be >= 1");
  if (max_batch < 1) throw std::invalid_argument("max_batch must be >= 1");
  if (context_window < 1) {
    throw std::invalid_argument("context_window must be >= 1");
  }
}

ProviderSpec ProviderSpec::Local(std::size_t dim) {
  ProviderSpec s;
  s.provider_id = std::string(kLocalProviderId);
  s.model_id = "char3-hash";
  s.dim = dim;
  s.max_batch = 256;
  s.context_window = 1u << 20;
  return s;
}

namespace {

std::vector<std::string_view> WhitespaceTokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t b = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i > b) out.push_back(text.substr(b, i - b));
  }
  return out;
}

}  // namespace

std::size_t ApproxTokenCount(std::string_view text) {
  const std::size_t words = WhitespaceTokens(text).size();
  // words * 1.3 rounded up, in integers.
  return (words * 13 + 9) / 10;
}

std::string TruncateToContext(std::string_view text, std::size_t context_window,
                              bool* truncated) {
  if (truncated != nullptr) *truncated = false;
  if (ApproxTokenCount(text) <= context_window) return std::string(text);
  const auto words = WhitespaceTokens(text);
  const std::size_t keep = context_window * 10 / 13;
  if (truncated != nullptr) *truncated = true;
  if (keep == 0) return std::string();
  const std::string_view last = words[keep - 1];
  return std::string(text.substr(0, static_cast<std::size_t>(
                                        last.data() + last.size() - text.data())));
}

LocalEmbeddingProvider::LocalEmbeddingProvider(ProviderSpec spec)
    : spec_(std::move(spec)) {
  spec_.Validate();
  if (spec_.dim < 16) throw std::invalid_argument("local embedder needs dim >= 16");
}

std::vector<EmbeddingVector> LocalEmbeddingProvider::EmbedChunk(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(LocalEmbed(t, spec_.dim));
  return out;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderSpec spec,
                                             std::string api_key,
                                             http::RetryPolicy retry)
    : spec_(std::move(spec)), api_key_(std::move(api_key)), retry_(retry) {
  spec_.Validate();
  if (!spec_.endpoint_url) {
    throw ConfigError("provider '" + spec_.provider_id + "' has no endpoint URL");
  }
}

std::vector<std::vector<double>> ParseEmbeddingResponse(
    const nlohmann::json& reply, std::size_t expected_count,
    std::size_t expected_dim) {
  std::vector<std::vector<double>> out;
  auto read_vector = [&](const nlohmann::json& arr) {
    if (!arr.is_array()) throw ProtocolError("embedding is not an array");
    std::vector<double> v;
    v.reserve(arr.size());
    for (const auto& x : arr) {
      if (!x.is_number()) throw ProtocolError("non-numeric embedding component");
      const double d = x.get<double>();
      if (!std::isfinite(d)) throw ProtocolError("non-finite embedding component");
      v.push_back(d);
    }
    if (v.size() != expected_dim) {
      throw ProtocolError("embedding has dim " + std::to_string(v.size()) +
                          ", provider declares " + std::to_string(expected_dim));
    }
    return v;
  };
  if (reply.is_array()) {
    for (const auto& e : reply) out.push_back(read_vector(e));
  } else if (reply.is_object() && reply.contains("embeddings")) {
    for (const auto& e : reply.at("embeddings")) out.push_back(read_vector(e));
  } else if (reply.is_object() && reply.contains("data") &&
             reply.at("data").is_array()) {
    const auto& data = reply.at("data");
    out.resize(data.size());
    std::vector<bool> seen(data.size(), false);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& item = data[i];
      if (!item.is_object() || !item.contains("embedding")) {
        throw ProtocolError("data item without embedding");
      }
      const std::size_t idx =
          item.contains("index") ? item.at("index").get<std::size_t>() : i;
      if (idx >= data.size() || seen[idx]) {
        throw ProtocolError("bad or duplicate embedding index");
      }
      seen[idx] = true;
      out[idx] = read_vector(item.at("embedding"));
    }
  } else {
    throw ProtocolError("unrecognised embedding response shape");
  }
  if (out.size() != expected_count) {
    throw ProtocolError("expected " + std::to_string(expected_count) +
                        " embeddings, got " + std::to_string(out.size()));
  }
  return out;
}

std::vector<EmbeddingVector> HttpEmbeddingProvider::EmbedChunk(
    std::span<const std::string> texts) {
  nlohmann::json body{{"model", spec_.model_id},
                      {"input", std::vector<std::string>(texts.begin(), texts.end())}};
  const nlohmann::json reply =
      http::PostJson(*spec_.endpoint_url, body, api_key_, retry_);
  auto vectors = ParseEmbeddingResponse(reply, texts.size(), spec_.dim);
  std::vector<EmbeddingVector> out;
  out.reserve(vectors.size());
  for (auto& v : vectors) out.push_back({std::move(v), spec_.provider_id});
  return out;
}

namespace {

constexpr char kMagic[8] = {'P', 'B', 'E', 'M', 'B', 'C', '\0', '\0'};

void PutU32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void PutF64(std::ofstream& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof(bits));
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

class Reader {
 public:
  explicit Reader(const std::string& data) : data_(data) {}
  bool U32(std::uint32_t* v) {
    if (pos_ + 4 > data_.size()) return false;
    *v = 0;
    for (int i = 3; i >= 0; --i) {
      *v = (*v << 8) | static_cast<unsigned char>(data_[pos_ + i]);
    }
    pos_ += 4;
    return true;
  }
  bool F64(double* d) {
    if (pos_ + 8 > data_.size()) return false;
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) {
      bits = (bits << 8) | static_cast<unsigned char>(data_[pos_ + i]);
    }
    std::memcpy(d, &bits, sizeof(bits));
    pos_ += 8;
    return true;
  }
  bool Bytes(std::size_t n, std::string* s) {
    if (pos_ + n > data_.size()) return false;
    *s = data_.substr(pos_, n);
    pos_ += n;
    return true;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& data_;
  std::size_t pos_ = 0;
};

}  // namespace

EmbeddingCache::EmbeddingCache(std::string path) : path_(std::move(path)) {
  Load();
}

void EmbeddingCache::Load() {
  namespace fs = std::filesystem;
  bool valid = false;
  std::size_t good_bytes = 0;
  if (fs::exists(path_)) {
    const std::string data = ReadFile(path_);
    Reader r(data);
    std::string magic;
    std::uint32_t version = 0;
    if (r.Bytes(8, &magic) && std::memcmp(magic.data(), kMagic, 8) == 0 &&
        r.U32(&version) && version == kVersion) {
      valid = true;
      good_bytes = r.pos();
      while (true) {
        std::uint32_t klen = 0;
        std::uint32_t dim = 0;
        std::string key;
        if (!r.U32(&klen) || !r.Bytes(klen, &key) || !r.U32(&dim)) break;
        std::vector<double> v(dim);
        bool ok = true;
        for (std::uint32_t i = 0; i < dim && ok; ++i) ok = r.F64(&v[i]);
        if (!ok) break;
        entries_[key] = std::move(v);
        good_bytes = r.pos();
      }
    }
  }
  if (!valid) {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Error("cannot create embedding cache: " + path_);
    out_.write(kMagic, 8);
    PutU32(out_, kVersion);
    out_.flush();
    return;
  }
  // Drop a torn tail before appending.
  if (good_bytes < fs::file_size(path_)) fs::resize_file(path_, good_bytes);
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open embedding cache: " + path_);
}

std::optional<std::vector<double>> EmbeddingCache::Lookup(
    const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::Store(const std::string& key,
                           const std::vector<double>& vec) {
  std::unique_lock lock(mutex_);
  if (entries_.count(key) != 0) return;
  PutU32(out_, static_cast<std::uint32_t>(key.size()));
  out_.write(key.data(), static_cast<std::streamsize>(key.size()));
  PutU32(out_, static_cast<std::uint32_t>(vec.size()));
  for (double d : vec) PutF64(out_, d);
  out_.flush();
  entries_[key] = vec;
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

std::string EmbeddingCache::Key(const ProviderSpec& spec, std::string_view text) {
  // Two independent 64-bit hashes of the content.
  const std::uint64_t a = Fnv1a64(text);
  const std::uint64_t b = SplitMix64(Fnv1a64(text, 0x84222325cbf29ce4ULL) ^ text.size());
  return spec.provider_id + '\x1f' + spec.model_id + '\x1f' +
         std::to_string(spec.dim) + '\x1f' + HexDigest(a) + HexDigest(b);
}

Embedder::Embedder(std::unique_ptr<EmbeddingProvider> provider,
                   std::shared_ptr<EmbeddingCache> cache,
                   std::size_t max_in_flight)
    : provider_(std::move(provider)),
      cache_(std::move(cache)),
      max_in_flight_(max_in_flight == 0 ? 1 : max_in_flight) {}

EmbedBatchResult Embedder::EmbedBatch(const std::vector<std::string>& texts) {
  if (texts.empty()) throw std::invalid_argument("EmbedBatch: no texts");
  const ProviderSpec& spec = provider_->spec();
  EmbedBatchResult result;
  result.vectors.resize(texts.size());
  result.truncated.resize(texts.size(), false);

  std::vector<std::string> inputs(texts.size());
  std::vector<std::string> keys(texts.size());
  // Unique uncached inputs, each mapped to the positions that need it.
  std::vector<std::string> pending;
  std::unordered_map<std::string, std::size_t> pending_index;
  std::vector<std::vector<std::size_t>> pending_slots;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    bool cut = false;
    inputs[i] = TruncateToContext(texts[i], spec.context_window, &cut);
    result.truncated[i] = cut;
    keys[i] = EmbeddingCache::Key(spec, inputs[i]);
    if (cache_) {
      if (auto hit = cache_->Lookup(keys[i])) {
        result.vectors[i] = {std::move(*hit), spec.provider_id};
        ++result.cache_hits;
        continue;
      }
    }
    auto [it, inserted] = pending_index.emplace(keys[i], pending.size());
    if (inserted) {
      pending.push_back(inputs[i]);
      pending_slots.emplace_back();
    }
    pending_slots[it->second].push_back(i);
  }

  const std::size_t chunks = (pending.size() + spec.max_batch - 1) / spec.max_batch;
  std::vector<std::vector<EmbeddingVector>> chunk_out(chunks);
  ParallelFor(chunks, max_in_flight_, [&](std::size_t c) {
    const std::size_t begin = c * spec.max_batch;
    const std::size_t end = std::min(pending.size(), begin + spec.max_batch);
    chunk_out[c] = provider_->EmbedChunk(
        std::span<const std::string>(pending).subspan(begin, end - begin));
    if (chunk_out[c].size() != end - begin) {
      throw ProtocolError("provider returned wrong number of vectors");
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t k = 0; k < chunk_out[c].size(); ++k) {
      const std::size_t p = c * spec.max_batch + k;
      const EmbeddingVector& v = chunk_out[c][k];
      if (cache_) cache_->Store(keys[pending_slots[p].front()], v.components);
      for (std::size_t slot : pending_slots[p]) result.vectors[slot] = v;
    }
  }
  return result;
}

std::unique_ptr<EmbeddingProvider> MakeProvider(const ProviderSpec& spec) {
  if (spec.provider_id == kLocalProviderId) {
    return std::make_unique<LocalEmbeddingProvider>(spec);
  }
  return std::make_unique<HttpEmbeddingProvider>(spec, http::ApiKeyFromEnv());
}

EmbedBatchResult EmbedBatch(const std::vector<std::string>& texts,
                            const ProviderSpec& spec) {
  Embedder embedder(MakeProvider(spec));
  return embedder.EmbedBatch(texts);
}

}  // namespace perturbench::embed
