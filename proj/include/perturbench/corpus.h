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

#ifndef PERTURBENCH_CORPUS_H_
#define PERTURBENCH_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "perturbench/edits.h"
#include "perturbench/textcore.h"

namespace perturbench::corpus {

struct ParallelEntry {
  std::string id;
  std::string source;
  std::vector<std::string> references;
};

struct ParallelCorpus {
  std::vector<ParallelEntry> entries;

  std::size_t size() const { return entries.size(); }
};

// One `A` line. `fields` keeps the six |||-separated fields verbatim so a
// document can be written back byte for byte.
struct M2Annotation {
  text::Span span;
  std::string type;
  std::string correction;  // "-NONE-" is stored as ""
  int annotator = 0;
  bool noop = false;
  std::vector<std::string> fields;
};

struct M2Sentence {
  text::TokenSequence source;
  std::string source_line;  // text after "S "
  std::vector<M2Annotation> annotations;
  // Noop annotators map to an empty EditSet.
  std::map<int, metrics::EditSet> annotator_edits;
};

struct M2Document {
  std::vector<M2Sentence> sentences;

  std::size_t size() const { return sentences.size(); }
};

// Throws ParseError (with the 1-based line number) on malformed lines and
// out-of-range spans.
M2Document ParseM2(std::string_view contents);
M2Document LoadM2(const std::string& path);
std::string SerializeM2(const M2Document& doc);

// Throws StructuralError naming the offending file when line counts differ.
ParallelCorpus LoadParallel(const std::string& src_path,
                            const std::vector<std::string>& ref_paths);
// Writes the source and reference files back, one line per entry.
void WriteParallel(const ParallelCorpus& corpus, const std::string& src_path,
                   const std::vector<std::string>& ref_paths);
std::vector<std::string> LoadLines(const std::string& path);

struct ReviewOptions {
  // CSV column holding the text. Empty picks "review", then "text", then the
  // first column.
  std::string text_column;
};

struct ReviewSample {
  std::size_t corpus_size = 0;
  std::vector<std::size_t> document_ids;  // ascending
  std::vector<std::string> documents;
  std::vector<std::string> sentences;
};

// Parses RFC 4180-style CSV (quoted fields, doubled quotes, embedded
// newlines). Throws ParseError on an unterminated quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view contents);

// Reads all documents from a .csv file (header row required) or from a text
// file with one document per line. Markup line breaks are replaced by spaces.
std::vector<std::string> LoadDocuments(const std::string& path,
                                       const ReviewOptions& options = {});

// Uniform sample without replacement of `sample_size` document indices out of
// `corpus_size`, sorted ascending. Clamps to corpus_size with a warning.
std::vector<std::size_t> SampleIndices(std::size_t corpus_size,
                                       std::size_t sample_size,
                                       std::uint64_t seed);

ReviewSample LoadReviews(const std::string& path, std::size_t sample_size,
                         std::uint64_t seed, const ReviewOptions& options = {});

// Splits after '.', '!' or '?' when followed by whitespace.
std::vector<std::string> SplitSentences(std::string_view text);

struct CorpusStats {
  std::string name;
  std::size_t pair_count = 0;
  // references (or annotators) per sentence -> number of sentences
  std::map<std::size_t, std::size_t> ref_distribution;
};

CorpusStats Stats(const ParallelCorpus& corpus, std::string name = "parallel");
CorpusStats Stats(const M2Document& doc, std::string name = "m2");
CorpusStats Stats(const std::vector<std::string>& sentences,
                  std::string name = "text");

// Text rendering in the layout of a corpus statistics table.
std::string RenderStatsTable(const std::vector<CorpusStats>& rows);

}  // namespace perturbench::corpus

#endif  // PERTURBENCH_CORPUS_H_
