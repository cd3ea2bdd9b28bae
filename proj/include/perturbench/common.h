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

#ifndef PERTURBENCH_COMMON_H_
#define PERTURBENCH_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace perturbench {

inline constexpr std::string_view kVersion = "0.3.0";

// 64-bit FNV-1a. Stable across platforms and runs; used for seeds, cache keys
// and the hashing embedder.
constexpr std::uint64_t Fnv1a64(std::string_view data,
                                std::uint64_t basis = 0xcbf29ce484222325ULL) {
  std::uint64_t h = basis;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Order-sensitive combination of seed material.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view id,
                         std::uint64_t index);

std::string HexDigest(std::uint64_t value);

// printf("%.*f") without locale surprises.
std::string FormatFixed(double value, int decimals);

// Current UTC time, e.g. "2024-05-01T12:00:00.123Z".
std::string UtcTimestamp();

// Deterministic random stream. Only the raw engine output (fully specified by
// the standard for mt19937_64) is used; all derived draws are implemented here
// so results do not depend on the standard library's distributions.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, 1).
  double UniformReal();
  // Uniform in [0, n). n must be > 0.
  std::size_t UniformIndex(std::size_t n);
  bool Bernoulli(double p) { return UniformReal() < p; }

 private:
  std::mt19937_64 engine_;
};

// Minimal warning sink. Defaults to stderr; tests may capture.
using WarningSink = std::function<void(std::string_view)>;
void SetWarningSink(WarningSink sink);
void Warn(std::string_view message);

// UTF-8 helpers. Invalid bytes are treated as one-byte code points.
std::vector<std::size_t> CodepointStarts(std::string_view text);
std::u32string DecodeUtf8(std::string_view text);
std::string EncodeUtf8(char32_t cp);

// ASCII-only lowercase; other bytes pass through.
std::string AsciiLower(std::string_view text);
bool IsAsciiWordChar(unsigned char c);

// Runs fn(0..n-1) on up to `jobs` threads. The first exception thrown by any
// call is rethrown after all workers stop.
void ParallelFor(std::size_t n, std::size_t jobs,
                 const std::function<void(std::size_t)>& fn);

std::vector<std::string> SplitString(std::string_view text, char delim);
std::string JoinStrings(const std::vector<std::string>& parts,
                        std::string_view sep);
std::string_view Trim(std::string_view text);

// Reads a text file into lines: strips one trailing '\n' (and '\r' before it)
// per line; a final newline does not produce an extra empty line.
std::vector<std::string> ReadLines(const std::string& path);
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace perturbench

#endif  // PERTURBENCH_COMMON_H_
