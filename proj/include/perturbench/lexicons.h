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

#ifndef PERTURBENCH_LEXICONS_H_
#define PERTURBENCH_LEXICONS_H_

#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace perturbench::perturb {

using WordTable = std::map<std::string, std::vector<std::string>>;

// Returns contextually similar words for `word`, most similar first. Used
// when no static neighbour table is available.
using NeighborProvider =
    std::function<std::vector<std::string>(std::string_view word)>;

// Lookup tables behind the augmenters. Keys of the word tables are lowercase.
struct Lexicons {
  WordTable ocr;           // recognised string -> confusable strings
  WordTable keyboard;      // key -> adjacent keys
  WordTable misspellings;  // word -> misspelled variants
  WordTable synonyms;
  WordTable antonyms;
  std::set<std::string> determiners;
  WordTable neighbors;     // word -> ranked similar words
  NeighborProvider neighbor_provider;

  // Tables compiled into the library from data/lexicons.
  static const Lexicons& Bundled();

  // Bundled tables, with every file present in `dir` replacing its
  // counterpart (ocr.tsv, keyboard_qwerty.tsv, misspellings.tsv,
  // synonyms.tsv, antonyms.tsv, determiners.txt, neighbors.tsv).
  static Lexicons WithOverrides(const std::string& dir);

  // Neighbours from the table, falling back to the provider.
  std::vector<std::string> NeighborsOf(std::string_view lower_word) const;
};

// `word<TAB>alt1,alt2,...`; '#' starts a comment line. Keys are lowercased
// unless `case_sensitive` (the OCR table distinguishes "o" from "O").
WordTable ParseWordTable(std::string_view contents,
                         bool case_sensitive = false);
// `char<TAB>neighbors`; neighbours are comma-separated when a comma is
// present, otherwise every code point is one neighbour.
WordTable ParseCharTable(std::string_view contents);
std::set<std::string> ParseWordList(std::string_view contents);

}  // namespace perturbench::perturb

#endif  // PERTURBENCH_LEXICONS_H_
