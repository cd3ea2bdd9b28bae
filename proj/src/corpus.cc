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

#include "perturbench/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <optional>
#include <sstream>

#include "perturbench/common.h"
#include "perturbench/errors.h"

namespace perturbench::corpus {
namespace {

constexpr std::string_view kFieldSep = "|||";

std::vector<std::string> SplitFields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(kFieldSep, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(line.substr(pos));
      return out;
    }
    out.emplace_back(line.substr(pos, next - pos));
    pos = next + kFieldSep.size();
  }
}

bool ParseInt(std::string_view s, long long* out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

M2Annotation ParseAnnotation(std::string_view body, std::size_t ntokens,
                             std::size_t line_no) {
  M2Annotation a;
  a.fields = SplitFields(body);
  if (a.fields.size() != 6) {
    throw ParseError("A-line needs 6 '|||'-separated fields, found " +
                         std::to_string(a.fields.size()),
                     line_no);
  }
  const std::string& span_text = a.fields[0];
  const std::size_t space = span_text.find(' ');
  long long b = 0;
  long long e = 0;
  if (space == std::string::npos ||
      !ParseInt(std::string_view(span_text).substr(0, space), &b) ||
      !ParseInt(std::string_view(span_text).substr(space + 1), &e)) {
    throw ParseError("malformed span '" + span_text + "'", line_no);
  }
  long long annotator = 0;
  if (!ParseInt(Trim(a.fields[5]), &annotator)) {
    throw ParseError("malformed annotator id '" + a.fields[5] + "'", line_no);
  }
  a.annotator = static_cast<int>(annotator);
  a.type = a.fields[1];
  a.noop = a.type == "noop" || (b == -1 && e == -1);
  if (a.noop) return a;
  if (b < 0 || e < b || static_cast<std::size_t>(e) > ntokens) {
    throw ParseError("span " + std::to_string(b) + " " + std::to_string(e) +
                         " out of bounds for " + std::to_string(ntokens) +
                         "-token sentence",
                     line_no);
  }
  a.span = {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
  a.correction = a.fields[2] == "-NONE-" ? std::string() : a.fields[2];
  return a;
}

void FinishSentence(M2Sentence& s) {
  for (const M2Annotation& a : s.annotations) {
    metrics::EditSet& set = s.annotator_edits[a.annotator];
    if (!a.noop) set.edits.push_back({a.span, a.correction});
  }
  for (auto& [id, set] : s.annotator_edits) {
    std::stable_sort(set.edits.begin(), set.edits.end(),
                     [](const metrics::Edit& x, const metrics::Edit& y) {
                       return x.span < y.span;
                     });
  }
}

}  // namespace

M2Document ParseM2(std::string_view contents) {
  M2Document doc;
  bool open = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) end = contents.size();
    std::string_view line = contents.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) {
      if (open) FinishSentence(doc.sentences.back());
      open = false;
      continue;
    }
    if (line.rfind("S ", 0) == 0 || line == "S") {
      if (open) FinishSentence(doc.sentences.back());
      M2Sentence s;
      s.source_line = std::string(line.size() > 2 ? line.substr(2) : "");
      s.source = text::TokenSequence::FromWhitespace(s.source_line);
      doc.sentences.push_back(std::move(s));
      open = true;
    } else if (line.rfind("A ", 0) == 0) {
      if (!open) throw ParseError("A-line outside a sentence block", line_no);
      M2Sentence& s = doc.sentences.back();
      s.annotations.push_back(
          ParseAnnotation(line.substr(2), s.source.size(), line_no));
    } else {
      throw ParseError("expected an S- or A-line", line_no);
    }
  }
  if (open) FinishSentence(doc.sentences.back());
  return doc;
}

M2Document LoadM2(const std::string& path) {
  try {
    return ParseM2(ReadFile(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

std::string SerializeM2(const M2Document& doc) {
  std::string out;
  for (const M2Sentence& s : doc.sentences) {
    out += "S " + s.source_line + "\n";
    for (const M2Annotation& a : s.annotations) {
      out += "A " + JoinStrings(a.fields, kFieldSep) + "\n";
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> LoadLines(const std::string& path) {
  return ReadLines(path);
}

ParallelCorpus LoadParallel(const std::string& src_path,
                            const std::vector<std::string>& ref_paths) {
  if (ref_paths.empty()) {
    throw std::invalid_argument("parallel corpus needs at least one reference");
  }
  const std::vector<std::string> src = ReadLines(src_path);
  std::vector<std::vector<std::string>> refs;
  for (const std::string& p : ref_paths) {
    refs.push_back(ReadLines(p));
    if (refs.back().size() != src.size()) {
      throw StructuralError(p + " has " + std::to_string(refs.back().size()) +
                            " lines but " + src_path + " has " +
                            std::to_string(src.size()));
    }
  }
  ParallelCorpus corpus;
  corpus.entries.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    ParallelEntry e;
    e.id = std::to_string(i);
    e.source = src[i];
    for (const auto& r : refs) e.references.push_back(r[i]);
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

void WriteParallel(const ParallelCorpus& corpus, const std::string& src_path,
                   const std::vector<std::string>& ref_paths) {
  std::string src;
  std::vector<std::string> refs(ref_paths.size());
  for (const ParallelEntry& e : corpus.entries) {
    if (e.references.size() != ref_paths.size()) {
      throw StructuralError("entry " + e.id + " has " +
                            std::to_string(e.references.size()) +
                            " references, expected " +
                            std::to_string(ref_paths.size()));
    }
    src += e.source + "\n";
    for (std::size_t r = 0; r < refs.size(); ++r) refs[r] += e.references[r] + "\n";
  }
  WriteFile(src_path, src);
  for (std::size_t r = 0; r < refs.size(); ++r) WriteFile(ref_paths[r], refs[r]);
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view contents) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_data = false;
  std::size_t line_no = 1;
  std::size_t quote_line = 0;
  for (std::size_t i = 0; i < contents.size(); ++i) {
    const char c = contents[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < contents.size() && contents[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line_no;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        quote_line = line_no;
        row_has_data = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_data = true;
        break;
      case '\r':
        break;
      case '\n':
        ++line_no;
        if (row_has_data || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        row_has_data = false;
        break;
      default:
        field += c;
        row_has_data = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted CSV field", quote_line);
  if (row_has_data || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string StripMarkupBreaks(std::string text) {
  // <br>, <br/>, <br /> in any case.
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<' && i + 3 <= text.size() &&
        AsciiLower(std::string_view(text).substr(i + 1, 2)) == "br") {
      const std::size_t close = text.find('>', i);
      if (close != std::string::npos) {
        const std::string_view inner =
            Trim(std::string_view(text).substr(i + 3, close - i - 3));
        if (inner.empty() || inner == "/") {
          out += ' ';
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::vector<std::string> LoadDocuments(const std::string& path,
                                       const ReviewOptions& options) {
  std::vector<std::string> docs;
  if (EndsWith(AsciiLower(path), ".csv")) {
    const auto rows = ParseCsv(ReadFile(path));
    if (rows.empty()) return docs;
    const auto& header = rows.front();
    std::size_t column = 0;
    auto find = [&](std::string_view name) -> std::optional<std::size_t> {
      for (std::size_t c = 0; c < header.size(); ++c) {
        if (AsciiLower(Trim(header[c])) == AsciiLower(name)) return c;
      }
      return std::nullopt;
    };
    if (!options.text_column.empty()) {
      auto c = find(options.text_column);
      if (!c) {
        throw ConfigError(path + ": no CSV column named '" +
                          options.text_column + "'");
      }
      column = *c;
    } else if (auto c = find("review")) {
      column = *c;
    } else if (auto c2 = find("text")) {
      column = *c2;
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      if (column >= rows[r].size()) {
        throw ParseError(path + ": CSV record " + std::to_string(r) +
                             " has no column " + std::to_string(column),
                         0);
      }
      docs.push_back(StripMarkupBreaks(rows[r][column]));
    }
  } else {
    for (std::string& line : ReadLines(path)) {
      if (Trim(line).empty()) continue;
      docs.push_back(StripMarkupBreaks(std::move(line)));
    }
  }
  return docs;
}

std::vector<std::size_t> SampleIndices(std::size_t corpus_size,
                                       std::size_t sample_size,
                                       std::uint64_t seed) {
  if (sample_size > corpus_size) {
    Warn("sample size " + std::to_string(sample_size) +
         " exceeds corpus size " + std::to_string(corpus_size) +
         "; using the whole corpus");
    sample_size = corpus_size;
  }
  std::vector<std::size_t> ids(corpus_size);
  std::iota(ids.begin(), ids.end(), 0);
  RandomStream rng(DeriveSeed(seed, "sample", corpus_size));
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < sample_size; ++i) {
    const std::size_t j = i + rng.UniformIndex(corpus_size - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(sample_size);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<std::string> SplitSentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    const std::string_view s = Trim(text.substr(start, end - start));
    if (!s.empty()) out.emplace_back(s);
  };
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        std::isspace(static_cast<unsigned char>(text[i + 1]))) {
      flush(i + 1);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

ReviewSample LoadReviews(const std::string& path, std::size_t sample_size,
                         std::uint64_t seed, const ReviewOptions& options) {
  std::vector<std::string> docs = LoadDocuments(path, options);
  ReviewSample sample;
  sample.corpus_size = docs.size();
  sample.document_ids = SampleIndices(docs.size(), sample_size, seed);
  for (std::size_t id : sample.document_ids) {
    for (std::string& s : SplitSentences(docs[id])) {
      sample.sentences.push_back(std::move(s));
    }
    sample.documents.push_back(std::move(docs[id]));
  }
  return sample;
}

CorpusStats Stats(const ParallelCorpus& corpus, std::string name) {
  CorpusStats s;
  s.name = std::move(name);
  s.pair_count = corpus.entries.size();
  for (const auto& e : corpus.entries) ++s.ref_distribution[e.references.size()];
  return s;
}

CorpusStats Stats(const M2Document& doc, std::string name) {
  CorpusStats s;
  s.name = std::move(name);
  s.pair_count = doc.sentences.size();
  for (const auto& sent : doc.sentences) {
    ++s.ref_distribution[sent.annotator_edits.size()];
  }
  return s;
}

CorpusStats Stats(const std::vector<std::string>& sentences, std::string name) {
  CorpusStats s;
  s.name = std::move(name);
  s.pair_count = sentences.size();
  if (!sentences.empty()) s.ref_distribution[0] = sentences.size();
  return s;
}

namespace {

std::string GroupThousands(std::size_t n) {
  std::string digits = std::to_string(n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

}  // namespace

std::string RenderStatsTable(const std::vector<CorpusStats>& rows) {
  std::size_t w0 = std::string("Dataset").size();
  std::size_t w1 = std::string("# sentence pairs").size();
  for (const auto& r : rows) {
    w0 = std::max(w0, r.name.size());
    w1 = std::max(w1, GroupThousands(r.pair_count).size());
  }
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  std::string out = pad("Dataset", w0) + "  " + pad("# sentence pairs", w1) +
                    "  References per sentence\n";
  for (const auto& r : rows) {
    std::string dist;
    for (const auto& [refs, count] : r.ref_distribution) {
      if (!dist.empty()) dist += ' ';
      dist += std::to_string(refs) + ":" + std::to_string(count);
    }
    std::string count = GroupThousands(r.pair_count);
    out += pad(r.name, w0) + "  " +
           std::string(w1 - count.size(), ' ') + count + "  " +
           (dist.empty() ? "-" : dist) + "\n";
  }
  return out;
}

}  // namespace perturbench::corpus
