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

#include "perturbench/textcore.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "perturbench/common.h"

namespace perturbench::text {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
           (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
  }
  switch (cp) {
    case 0x00A1:  // ¡
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x00BF:  // ¿
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x2026:  // …
      return true;
    default:
      return false;
  }
}

void PushToken(TokenSequence& seq, std::string_view text, std::size_t begin,
               std::size_t end) {
  seq.tokens.emplace_back(text.substr(begin, end - begin));
  seq.offsets.push_back({begin, end});
}

// Splits one whitespace-delimited chunk [begin, end) of `text`.
void SplitChunk(TokenSequence& seq, std::string_view text, std::size_t begin,
                std::size_t end) {
  const std::string_view chunk = text.substr(begin, end - begin);
  std::vector<std::size_t> starts = CodepointStarts(chunk);
  const std::size_t ncp = starts.size();
  starts.push_back(chunk.size());
  auto cp_at = [&](std::size_t k) {
    return DecodeUtf8(chunk.substr(starts[k], starts[k + 1] - starts[k]))[0];
  };

  std::size_t lo = 0;
  while (lo < ncp && IsPunctuation(cp_at(lo))) {
    PushToken(seq, text, begin + starts[lo], begin + starts[lo + 1]);
    ++lo;
  }
  std::size_t hi = ncp;
  while (hi > lo && IsPunctuation(cp_at(hi - 1))) --hi;
  if (hi > lo) PushToken(seq, text, begin + starts[lo], begin + starts[hi]);
  for (std::size_t k = hi; k < ncp; ++k) {
    PushToken(seq, text, begin + starts[k], begin + starts[k + 1]);
  }
}

}  // namespace

std::string_view TokenSequence::GapBefore(std::size_t i) const {
  const std::size_t from = i == 0 ? 0 : offsets[i - 1].end;
  const std::size_t to = i < offsets.size() ? offsets[i].begin : raw.size();
  return std::string_view(raw).substr(from, to - from);
}

bool TokenSequence::IsConsistent() const {
  if (tokens.size() != offsets.size()) return false;
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Span& s = offsets[i];
    if (tokens[i].empty() || s.begin < prev_end || s.end <= s.begin ||
        s.end > raw.size()) {
      return false;
    }
    if (raw.compare(s.begin, s.size(), tokens[i]) != 0) return false;
    prev_end = s.end;
  }
  return true;
}

TokenSequence TokenSequence::FromTokens(std::vector<std::string> tokens) {
  TokenSequence seq;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) continue;
    if (!seq.raw.empty()) seq.raw.push_back(' ');
    const std::size_t begin = seq.raw.size();
    seq.raw.append(tokens[i]);
    seq.offsets.push_back({begin, seq.raw.size()});
    seq.tokens.push_back(std::move(tokens[i]));
  }
  return seq;
}

TokenSequence TokenSequence::FromWhitespace(std::string_view text) {
  TokenSequence seq;
  seq.raw = std::string(text);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > begin) PushToken(seq, text, begin, i);
  }
  return seq;
}

TokenSequence Tokenize(std::string_view text) {
  TokenSequence seq;
  seq.raw = std::string(text);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    const std::size_t begin = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > begin) SplitChunk(seq, seq.raw, begin, i);
  }
  return seq;
}

std::string Detokenize(const TokenSequence& seq) {
  std::string out;
  out.reserve(seq.raw.size());
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    out.append(seq.GapBefore(i));
    out.append(seq.tokens[i]);
  }
  out.append(seq.GapBefore(seq.tokens.size()));
  return out;
}

double JaccardUnigram(const std::vector<std::string>& a,
                      const std::vector<std::string>& b) {
  std::set<std::string> sa;
  std::set<std::string> sb;
  for (const auto& t : a) sa.insert(AsciiLower(t));
  for (const auto& t : b) sb.insert(AsciiLower(t));
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double JaccardUnigram(const TokenSequence& a, const TokenSequence& b) {
  return JaccardUnigram(a.tokens, b.tokens);
}

std::string_view OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kMatch:
      return "match";
    case OpKind::kSubstitute:
      return "substitute";
    case OpKind::kInsert:
      return "insert";
    case OpKind::kDelete:
      return "delete";
    case OpKind::kTranspose:
      return "transpose";
  }
  return "?";
}

namespace {

using Table = std::vector<std::vector<std::size_t>>;

bool IsTransposition(const std::vector<std::string>& a,
                     const std::vector<std::string>& b, std::size_t i,
                     std::size_t j) {
  return i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] &&
         a[i - 1] != b[j - 1];
}

Table CostTable(const std::vector<std::string>& a,
                const std::vector<std::string>& b) {
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  Table d(m + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t best = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                   d[i - 1][j - 1] + sub});
      if (IsTransposition(a, b, i, j)) best = std::min(best, d[i - 2][j - 2] + 1);
      d[i][j] = best;
    }
  }
  return d;
}

}  // namespace

std::size_t DamerauLevenshtein(const std::vector<std::string>& src,
                               const std::vector<std::string>& tgt) {
  return CostTable(src, tgt)[src.size()][tgt.size()];
}

std::vector<AlignmentOp> Align(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  const Table d = CostTable(a, b);
  std::vector<AlignmentOp> ops;
  std::size_t i = a.size();
  std::size_t j = b.size();
  while (i > 0 || j > 0) {
    const std::size_t here = d[i][j];
    if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && here == d[i - 1][j - 1]) {
      ops.push_back({OpKind::kMatch, {i - 1, i}, {j - 1, j}});
      --i;
      --j;
    } else if (IsTransposition(a, b, i, j) && here == d[i - 2][j - 2] + 1) {
      ops.push_back({OpKind::kTranspose, {i - 2, i}, {j - 2, j}});
      i -= 2;
      j -= 2;
    } else if (i > 0 && j > 0 && a[i - 1] != b[j - 1] &&
               here == d[i - 1][j - 1] + 1) {
      ops.push_back({OpKind::kSubstitute, {i - 1, i}, {j - 1, j}});
      --i;
      --j;
    } else if (i > 0 && here == d[i - 1][j] + 1) {
      ops.push_back({OpKind::kDelete, {i - 1, i}, {j, j}});
      --i;
    } else {
      ops.push_back({OpKind::kInsert, {i, i}, {j - 1, j}});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

std::vector<AlignmentOp> Align(const TokenSequence& src,
                               const TokenSequence& tgt) {
  return Align(src.tokens, tgt.tokens);
}

std::size_t AlignmentCost(const std::vector<AlignmentOp>& ops) {
  return static_cast<std::size_t>(
      std::count_if(ops.begin(), ops.end(), [](const AlignmentOp& op) {
        return op.kind != OpKind::kMatch;
      }));
}

std::size_t NGramBag::Count(const std::vector<std::string>& gram) const {
  const auto it = counts.find(gram);
  return it == counts.end() ? 0 : it->second;
}

std::size_t NGramBag::Total() const {
  std::size_t total = 0;
  for (const auto& [gram, c] : counts) total += c;
  return total;
}

NGramBag NGrams(const std::vector<std::string>& tokens, std::size_t n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
  NGramBag bag;
  bag.n = n;
  if (tokens.size() < n) return bag;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++bag.counts[std::vector<std::string>(tokens.begin() + i,
                                          tokens.begin() + i + n)];
  }
  return bag;
}

NGramBag NGrams(const TokenSequence& seq, std::size_t n) {
  return NGrams(seq.tokens, n);
}

}  // namespace perturbench::text
