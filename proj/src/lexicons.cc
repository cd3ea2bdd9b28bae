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

#include "perturbench/lexicons.h"

#include <filesystem>

#include "perturbench/common.h"
#include "bundled_lexicons.h"

namespace perturbench::perturb {
namespace {

// Yields (key, value) for each non-comment line of a TSV.
template <typename Fn>
void ForEachEntry(std::string_view contents, Fn&& fn) {
  for (const std::string& raw_line : SplitString(contents, '\n')) {
    std::string_view line = raw_line;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) continue;
    fn(line.substr(0, tab), line.substr(tab + 1));
  }
}

std::vector<std::string> SplitValues(std::string_view values) {
  std::vector<std::string> out;
  for (const std::string& v : SplitString(values, ',')) {
    const std::string_view t = Trim(v);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace

WordTable ParseWordTable(std::string_view contents, bool case_sensitive) {
  WordTable table;
  ForEachEntry(contents, [&](std::string_view key, std::string_view values) {
    auto vals = SplitValues(values);
    if (vals.empty()) return;
    const std::string k(Trim(key));
    auto& slot = table[case_sensitive ? k : AsciiLower(k)];
    slot.insert(slot.end(), vals.begin(), vals.end());
  });
  return table;
}

WordTable ParseCharTable(std::string_view contents) {
  WordTable table;
  ForEachEntry(contents, [&](std::string_view key, std::string_view values) {
    std::vector<std::string> vals;
    if (values.find(',') != std::string_view::npos) {
      vals = SplitValues(values);
    } else {
      for (char32_t cp : DecodeUtf8(Trim(values))) vals.push_back(EncodeUtf8(cp));
    }
    if (vals.empty()) return;
    auto& slot = table[std::string(key)];
    slot.insert(slot.end(), vals.begin(), vals.end());
  });
  return table;
}

std::set<std::string> ParseWordList(std::string_view contents) {
  std::set<std::string> words;
  for (const std::string& line : SplitString(contents, '\n')) {
    const std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    words.insert(AsciiLower(t));
  }
  return words;
}

const Lexicons& Lexicons::Bundled() {
  static const Lexicons lex = [] {
    Lexicons l;
    l.ocr = ParseWordTable(bundled::kOcr, /*case_sensitive=*/true);
    l.keyboard = ParseCharTable(bundled::kKeyboard);
    l.misspellings = ParseWordTable(bundled::kMisspellings);
    l.synonyms = ParseWordTable(bundled::kSynonyms);
    l.antonyms = ParseWordTable(bundled::kAntonyms);
    l.determiners = ParseWordList(bundled::kDeterminers);
    l.neighbors = ParseWordTable(bundled::kNeighbors);
    return l;
  }();
  return lex;
}

Lexicons Lexicons::WithOverrides(const std::string& dir) {
  namespace fs = std::filesystem;
  Lexicons l = Bundled();
  auto load = [&](const char* name, auto parse, auto& slot) {
    const fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) slot = parse(ReadFile(p.string()));
  };
  load("ocr.tsv", [](std::string_view c) { return ParseWordTable(c, true); },
       l.ocr);
  load("keyboard_qwerty.tsv", ParseCharTable, l.keyboard);
  auto words = [](std::string_view c) { return ParseWordTable(c); };
  load("misspellings.tsv", words, l.misspellings);
  load("synonyms.tsv", words, l.synonyms);
  load("antonyms.tsv", words, l.antonyms);
  load("determiners.txt", ParseWordList, l.determiners);
  load("neighbors.tsv", words, l.neighbors);
  return l;
}

std::vector<std::string> Lexicons::NeighborsOf(
    std::string_view lower_word) const {
  const auto it = neighbors.find(std::string(lower_word));
  if (it != neighbors.end()) return it->second;
  if (neighbor_provider) return neighbor_provider(lower_word);
  return {};
}

}  // namespace perturbench::perturb
