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

#ifndef PERTURBENCH_TEXTCORE_H_
#define PERTURBENCH_TEXTCORE_H_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perturbench::text {

// Half-open [begin, end) range of token (or byte) indices.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

// A sentence split into tokens. offsets[i] is the byte range of tokens[i]
// inside raw; offsets are strictly increasing and never overlap.
struct TokenSequence {
  std::string raw;
  std::vector<std::string> tokens;
  std::vector<Span> offsets;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  // Text between token i-1 and token i (i == size() gives the trailing gap).
  std::string_view GapBefore(std::size_t i) const;

  // Checks the offset/token invariants.
  bool IsConsistent() const;

  // Tokens separated by single spaces; raw is the joined string.
  static TokenSequence FromTokens(std::vector<std::string> tokens);
  // Pre-tokenized text: tokens are maximal runs of non-space characters.
  static TokenSequence FromWhitespace(std::string_view text);
};

// Whitespace split, then leading and trailing punctuation peeled off into
// single-character tokens. Interior punctuation ("don't", "e.g") is kept.
TokenSequence Tokenize(std::string_view text);

// Rebuilds raw from tokens and the recorded gaps.
std::string Detokenize(const TokenSequence& seq);

// |A ∩ B| / |A ∪ B| over lowercased token sets. Two empty sequences give 1.
double JaccardUnigram(const TokenSequence& a, const TokenSequence& b);
double JaccardUnigram(const std::vector<std::string>& a,
                      const std::vector<std::string>& b);

enum class OpKind { kMatch, kSubstitute, kInsert, kDelete, kTranspose };

std::string_view OpKindName(OpKind kind);

struct AlignmentOp {
  OpKind kind;
  Span src;
  Span tgt;
  friend bool operator==(const AlignmentOp&, const AlignmentOp&) = default;
};

// Minimum-cost token alignment under restricted Damerau-Levenshtein
// (unit costs, adjacent transpositions). Ops are in source order. At equal
// cost the backtrace prefers match, transpose, substitute, delete, insert.
std::vector<AlignmentOp> Align(const std::vector<std::string>& src,
                               const std::vector<std::string>& tgt);
std::vector<AlignmentOp> Align(const TokenSequence& src,
                               const TokenSequence& tgt);

// Number of non-match ops, i.e. the edit distance realised by `ops`.
std::size_t AlignmentCost(const std::vector<AlignmentOp>& ops);

// Edit distance only, without backtrace.
std::size_t DamerauLevenshtein(const std::vector<std::string>& src,
                               const std::vector<std::string>& tgt);

struct NGramBag {
  std::size_t n = 1;
  std::map<std::vector<std::string>, std::size_t> counts;

  std::size_t Count(const std::vector<std::string>& gram) const;
  std::size_t Total() const;
};

// Throws std::invalid_argument when n < 1.
NGramBag NGrams(const std::vector<std::string>& tokens, std::size_t n);
NGramBag NGrams(const TokenSequence& seq, std::size_t n);

}  // namespace perturbench::text

#endif  // PERTURBENCH_TEXTCORE_H_
