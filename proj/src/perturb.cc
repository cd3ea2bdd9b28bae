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

#include "perturbench/perturb.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

#include "perturbench/errors.h"

namespace perturbench::perturb {

using text::TokenSequence;

std::string_view KindName(Kind kind) {
  switch (kind) {
    case Kind::kOcr:
      return "ocr";
    case Kind::kSpelling:
      return "spelling";
    case Kind::kKeyboard:
      return "keyboard";
    case Kind::kSplit:
      return "split";
    case Kind::kSwapWord:
      return "swapWord";
    case Kind::kDeleteWord:
      return "deleteWord";
    case Kind::kContextualInsert:
      return "contextualInsert";
    case Kind::kContextualSubstitute:
      return "contextualSubstitute";
    case Kind::kCharSubstitute:
      return "charSubstitute";
    case Kind::kCharInsert:
      return "charInsert";
    case Kind::kCharSwap:
      return "charSwap";
    case Kind::kCharDelete:
      return "charDelete";
    case Kind::kSynonym:
      return "synonym";
    case Kind::kAntonym:
      return "antonym";
  }
  return "?";
}

namespace {

std::string Normalize(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

Kind ParseKind(std::string_view name) {
  const std::string norm = Normalize(Trim(name));
  // Single-letter codes resolve to one representative per initial.
  if (norm == "o") return Kind::kOcr;
  if (norm == "s") return Kind::kSpelling;
  if (norm == "k") return Kind::kKeyboard;
  if (norm == "d") return Kind::kDeleteWord;
  if (norm == "c") return Kind::kCharSubstitute;
  if (norm == "a") return Kind::kAntonym;
  for (Kind k : kAllKinds) {
    if (Normalize(KindName(k)) == norm) return k;
  }
  throw std::invalid_argument("unknown perturbation kind: " +
                              std::string(name));
}

std::string ComboLabel(std::span<const Kind> kinds) {
  std::string label;
  for (Kind k : kinds) label.push_back(KindName(k).front());
  return label;
}

std::vector<Kind> ParseCombo(std::string_view spec) {
  std::vector<Kind> kinds;
  for (const std::string& part : SplitString(spec, ',')) {
    if (Trim(part).empty()) continue;
    kinds.push_back(ParseKind(part));
  }
  if (kinds.empty()) throw std::invalid_argument("empty perturbation combo");
  return kinds;
}

std::vector<std::vector<Kind>> ParseCombos(std::string_view spec) {
  std::vector<std::vector<Kind>> combos;
  for (const std::string& part : SplitString(spec, ';')) {
    if (Trim(part).empty()) continue;
    combos.push_back(ParseCombo(part));
  }
  if (combos.empty()) throw std::invalid_argument("no perturbation combos");
  return combos;
}

std::vector<std::vector<Kind>> EnumerateCombos(std::span<const Kind> kinds,
                                               std::size_t k) {
  std::vector<std::vector<Kind>> out;
  if (k == 0 || k > kinds.size()) return out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<Kind> combo;
    for (std::size_t i : idx) combo.push_back(kinds[i]);
    out.push_back(std::move(combo));
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == kinds.size() - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

void PerturbationConfig::Validate() const {
  if (kinds.empty() || kinds.size() > 5) {
    throw std::invalid_argument("a perturbation chain needs 1 to 5 kinds");
  }
  if (!(prob_per_token >= 0.0 && prob_per_token <= 1.0)) {
    throw std::invalid_argument("prob_per_token must be in [0, 1]");
  }
  if (max_affected_words < 1) {
    throw std::invalid_argument("max_affected_words must be >= 1");
  }
  if (!(jaccard_min >= 0.0 && jaccard_min <= 1.0)) {
    throw std::invalid_argument("jaccard_min must be in [0, 1]");
  }
  if (contextual_top_k < 1) {
    throw std::invalid_argument("contextual_top_k must be >= 1");
  }
}

std::vector<std::size_t> SelectPositions(std::span<const std::size_t> eligible,
                                         double prob, std::size_t max_selected,
                                         RandomStream& rng) {
  std::vector<std::size_t> chosen;
  for (std::size_t pos : eligible) {
    // Every eligible position consumes exactly one draw, so later draws do
    // not depend on where the cap cut in.
    const bool hit = rng.Bernoulli(prob);
    if (hit && chosen.size() < max_selected) chosen.push_back(pos);
  }
  return chosen;
}

namespace {

// Mutable view of a sentence: each piece is a token and the gap before it.
struct Piece {
  std::string gap;
  std::string text;
};

struct Draft {
  std::vector<Piece> pieces;
  std::string trailing;

  explicit Draft(const TokenSequence& seq) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      pieces.push_back({std::string(seq.GapBefore(i)), seq.tokens[i]});
    }
    trailing = std::string(seq.GapBefore(seq.size()));
  }

  void Erase(std::size_t i) {
    if (i == 0 && pieces.size() > 1) pieces[1].gap = pieces[0].gap;
    pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(i));
  }

  // Inserts a new word before piece i (i == size() appends).
  void InsertBefore(std::size_t i, std::string word) {
    if (i < pieces.size()) {
      Piece p{pieces[i].gap, std::move(word)};
      pieces[i].gap = " ";
      pieces.insert(pieces.begin() + static_cast<std::ptrdiff_t>(i),
                    std::move(p));
    } else {
      pieces.push_back({pieces.empty() ? "" : " ", std::move(word)});
    }
  }

  TokenSequence Render() const {
    std::string raw;
    for (const Piece& p : pieces) {
      raw += p.gap;
      raw += p.text;
    }
    raw += trailing;
    return text::Tokenize(raw);
  }
};

bool IsWord(std::string_view token) {
  return std::any_of(token.begin(), token.end(), [](char c) {
    return IsAsciiWordChar(static_cast<unsigned char>(c));
  });
}

std::size_t CodepointCount(std::string_view token) {
  return CodepointStarts(token).size();
}

bool StartsUpper(std::string_view s) {
  return !s.empty() && s.front() >= 'A' && s.front() <= 'Z';
}

std::string MatchCase(std::string_view original, std::string replacement) {
  if (StartsUpper(original) && !replacement.empty() &&
      replacement.front() >= 'a' && replacement.front() <= 'z') {
    replacement.front() = static_cast<char>(replacement.front() - 'a' + 'A');
  }
  return replacement;
}

template <typename Pred>
std::vector<std::size_t> EligibleWhere(const TokenSequence& seq, Pred pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (pred(seq.tokens[i])) out.push_back(i);
  }
  return out;
}

// Shared driver for augmenters that rewrite selected tokens in place.
template <typename Eligible, typename Rewrite>
ApplyResult RewriteTokens(const TokenSequence& seq,
                          const PerturbationConfig& cfg, RandomStream& rng,
                          Eligible eligible_pred, Rewrite rewrite) {
  ApplyResult result;
  const auto eligible = EligibleWhere(seq, eligible_pred);
  result.eligible = eligible.size();
  const auto chosen = SelectPositions(eligible, cfg.prob_per_token,
                                      cfg.max_affected_words, rng);
  result.selected = chosen.size();
  if (chosen.empty()) {
    result.seq = seq;
    return result;
  }
  Draft draft(seq);
  for (std::size_t i : chosen) {
    std::string next = rewrite(draft.pieces[i].text, rng);
    if (next != draft.pieces[i].text) ++result.modified;
    draft.pieces[i].text = std::move(next);
  }
  result.seq = draft.Render();
  return result;
}

void RequireTable(const WordTable& table, Kind kind) {
  if (table.empty()) {
    throw ConfigError("lexicon for " + std::string(KindName(kind)) +
                      " is empty");
  }
}

// Occurrences of OCR-table keys inside a token, as (byte offset, key).
std::vector<std::pair<std::size_t, const std::string*>> OcrMatches(
    std::string_view token, const WordTable& ocr) {
  std::vector<std::pair<std::size_t, const std::string*>> matches;
  for (std::size_t start : CodepointStarts(token)) {
    for (const auto& [key, alts] : ocr) {
      if (!key.empty() && token.compare(start, key.size(), key) == 0) {
        matches.emplace_back(start, &key);
      }
    }
  }
  return matches;
}

}  // namespace

std::string SplitTokenAt(std::string_view token, std::size_t pos) {
  const auto starts = CodepointStarts(token);
  if (pos == 0 || pos >= starts.size()) {
    throw std::out_of_range("split position must be interior");
  }
  std::string out(token.substr(0, starts[pos]));
  out.push_back(' ');
  out.append(token.substr(starts[pos]));
  return out;
}

std::string SwapCharsAt(std::string_view token, std::size_t pos) {
  auto starts = CodepointStarts(token);
  if (pos + 1 >= starts.size()) throw std::out_of_range("swap position");
  starts.push_back(token.size());
  std::string out(token.substr(0, starts[pos]));
  out.append(token.substr(starts[pos + 1], starts[pos + 2] - starts[pos + 1]));
  out.append(token.substr(starts[pos], starts[pos + 1] - starts[pos]));
  out.append(token.substr(starts[pos + 2]));
  return out;
}

std::string DeleteCharAt(std::string_view token, std::size_t pos) {
  auto starts = CodepointStarts(token);
  if (pos >= starts.size()) throw std::out_of_range("delete position");
  starts.push_back(token.size());
  std::string out(token.substr(0, starts[pos]));
  out.append(token.substr(starts[pos + 1]));
  return out;
}

std::string InsertCharAt(std::string_view token, std::size_t pos, char c) {
  auto starts = CodepointStarts(token);
  if (pos > starts.size()) throw std::out_of_range("insert position");
  starts.push_back(token.size());
  std::string out(token.substr(0, starts[pos]));
  out.push_back(c);
  out.append(token.substr(starts[pos]));
  return out;
}

TokenSequence SwapWordsAt(const TokenSequence& seq, std::size_t index) {
  if (index + 1 >= seq.size()) throw std::out_of_range("swap index");
  Draft draft(seq);
  std::swap(draft.pieces[index].text, draft.pieces[index + 1].text);
  return draft.Render();
}

ApplyResult ApplyOcr(const TokenSequence& seq, const PerturbationConfig& cfg,
                     const Lexicons& lex, RandomStream& rng) {
  RequireTable(lex.ocr, Kind::kOcr);
  return RewriteTokens(
      seq, cfg, rng,
      [&](const std::string& t) { return !OcrMatches(t, lex.ocr).empty(); },
      [&](const std::string& t, RandomStream& r) {
        const auto matches = OcrMatches(t, lex.ocr);
        const auto& [offset, key] = matches[r.UniformIndex(matches.size())];
        const auto& alts = lex.ocr.at(*key);
        const std::string& repl = alts[r.UniformIndex(alts.size())];
        std::string out = t;
        out.replace(offset, key->size(), repl);
        return out;
      });
}

ApplyResult ApplySpelling(const TokenSequence& seq,
                          const PerturbationConfig& cfg, const Lexicons& lex,
                          RandomStream& rng) {
  RequireTable(lex.misspellings, Kind::kSpelling);
  return RewriteTokens(
      seq, cfg, rng,
      [&](const std::string& t) {
        return lex.misspellings.count(AsciiLower(t)) > 0;
      },
      [&](const std::string& t, RandomStream& r) {
        const auto& variants = lex.misspellings.at(AsciiLower(t));
        return MatchCase(t, variants[r.UniformIndex(variants.size())]);
      });
}

ApplyResult ApplyKeyboard(const TokenSequence& seq,
                          const PerturbationConfig& cfg, const Lexicons& lex,
                          RandomStream& rng) {
  RequireTable(lex.keyboard, Kind::kKeyboard);
  // Byte positions of characters with a known key (ASCII only).
  auto keyed = [&](std::string_view t) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::string lower = AsciiLower(t.substr(i, 1));
      if (static_cast<unsigned char>(t[i]) < 0x80 && lex.keyboard.count(lower)) {
        pos.push_back(i);
      }
    }
    return pos;
  };
  return RewriteTokens(
      seq, cfg, rng, [&](const std::string& t) { return !keyed(t).empty(); },
      [&](const std::string& t, RandomStream& r) {
        const auto positions = keyed(t);
        const std::size_t at = positions[r.UniformIndex(positions.size())];
        const auto& adj = lex.keyboard.at(AsciiLower(t.substr(at, 1)));
        std::string repl = adj[r.UniformIndex(adj.size())];
        if (t[at] >= 'A' && t[at] <= 'Z') repl = MatchCase("A", repl);
        std::string out = t;
        out.replace(at, 1, repl);
        return out;
      });
}

ApplyResult ApplyWordOps(const TokenSequence& seq,
                         const PerturbationConfig& cfg, RandomStream& rng,
                         Kind kind) {
  ApplyResult result;
  if (kind == Kind::kSplit) {
    return RewriteTokens(
        seq, cfg, rng,
        [](const std::string& t) { return IsWord(t) && CodepointCount(t) >= 2; },
        [](const std::string& t, RandomStream& r) {
          const std::size_t n = CodepointCount(t);
          return SplitTokenAt(t, 1 + r.UniformIndex(n - 1));
        });
  }
  if (kind == Kind::kSwapWord) {
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (IsWord(seq.tokens[i]) && IsWord(seq.tokens[i + 1])) {
        eligible.push_back(i);
      }
    }
    result.eligible = eligible.size();
    const auto chosen = SelectPositions(eligible, cfg.prob_per_token,
                                        cfg.max_affected_words, rng);
    Draft draft(seq);
    std::size_t touched_until = 0;  // positions < this were already swapped
    bool any = false;
    for (std::size_t i : chosen) {
      if (any && i < touched_until) continue;
      // A swap changes two positions; both count against the budget.
      if (result.modified + 2 > cfg.max_affected_words) break;
      ++result.selected;
      if (draft.pieces[i].text != draft.pieces[i + 1].text) {
        std::swap(draft.pieces[i].text, draft.pieces[i + 1].text);
        result.modified += 2;
      }
      touched_until = i + 2;
      any = true;
    }
    result.seq = result.selected > 0 ? draft.Render() : seq;
    return result;
  }
  if (kind == Kind::kDeleteWord) {
    const auto eligible =
        EligibleWhere(seq, [](const std::string& t) { return IsWord(t); });
    result.eligible = eligible.size();
    const auto chosen = SelectPositions(eligible, cfg.prob_per_token,
                                        cfg.max_affected_words, rng);
    result.selected = chosen.size();
    result.modified = chosen.size();
    Draft draft(seq);
    for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) draft.Erase(*it);
    result.seq = chosen.empty() ? seq : draft.Render();
    return result;
  }
  throw std::invalid_argument("not a word-level kind: " +
                              std::string(KindName(kind)));
}

ApplyResult ApplyContextual(const TokenSequence& seq,
                            const PerturbationConfig& cfg, const Lexicons& lex,
                            RandomStream& rng, Kind kind) {
  if (kind != Kind::kContextualInsert && kind != Kind::kContextualSubstitute) {
    throw std::invalid_argument("not a contextual kind: " +
                                std::string(KindName(kind)));
  }
  if (lex.neighbors.empty() && !lex.neighbor_provider) {
    throw ConfigError("contextual augmentation needs a neighbour table or "
                      "neighbour provider");
  }
  auto top_k = [&](const std::string& token) {
    auto n = lex.NeighborsOf(AsciiLower(token));
    if (n.size() > cfg.contextual_top_k) n.resize(cfg.contextual_top_k);
    return n;
  };
  if (kind == Kind::kContextualSubstitute) {
    return RewriteTokens(
        seq, cfg, rng,
        [&](const std::string& t) { return IsWord(t) && !top_k(t).empty(); },
        [&](const std::string& t, RandomStream& r) {
          const auto n = top_k(t);
          return MatchCase(t, n[r.UniformIndex(n.size())]);
        });
  }
  ApplyResult result;
  std::vector<std::size_t> eligible;
  std::vector<std::vector<std::string>> candidates(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!IsWord(seq.tokens[i])) continue;
    candidates[i] = top_k(seq.tokens[i]);
    if (!candidates[i].empty()) eligible.push_back(i);
  }
  result.eligible = eligible.size();
  const auto chosen = SelectPositions(eligible, cfg.prob_per_token,
                                      cfg.max_affected_words, rng);
  result.selected = chosen.size();
  result.modified = chosen.size();
  // (insert-before index, word); a neighbour goes right before or after the
  // word it was drawn for.
  std::vector<std::pair<std::size_t, std::string>> inserts;
  for (std::size_t i : chosen) {
    const auto& n = candidates[i];
    std::string word = n[rng.UniformIndex(n.size())];
    const bool after = rng.Bernoulli(0.5);
    inserts.emplace_back(after ? i + 1 : i, std::move(word));
  }
  if (inserts.empty()) {
    result.seq = seq;
    return result;
  }
  std::stable_sort(inserts.begin(), inserts.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  Draft draft(seq);
  for (auto& [at, word] : inserts) draft.InsertBefore(at, std::move(word));
  result.seq = draft.Render();
  return result;
}

ApplyResult ApplyCharOps(const TokenSequence& seq,
                         const PerturbationConfig& cfg, RandomStream& rng,
                         Kind kind) {
  auto letter = [](RandomStream& r, char avoid) {
    // Uniform over a-z, excluding the character being replaced.
    const bool exclude = avoid >= 'a' && avoid <= 'z';
    std::size_t k = r.UniformIndex(exclude ? 25 : 26);
    if (exclude && static_cast<char>('a' + k) >= avoid) ++k;
    return static_cast<char>('a' + k);
  };
  switch (kind) {
    case Kind::kCharSubstitute:
      return RewriteTokens(
          seq, cfg, rng, [](const std::string& t) { return IsWord(t); },
          [&](const std::string& t, RandomStream& r) {
            auto starts = CodepointStarts(t);
            const std::size_t pos = r.UniformIndex(starts.size());
            starts.push_back(t.size());
            const std::string old = t.substr(starts[pos], starts[pos + 1] - starts[pos]);
            const char lower = AsciiLower(old).front();
            std::string out = t;
            out.replace(starts[pos], old.size(), 1, letter(r, lower));
            return out;
          });
    case Kind::kCharInsert:
      return RewriteTokens(
          seq, cfg, rng, [](const std::string& t) { return IsWord(t); },
          [&](const std::string& t, RandomStream& r) {
            const std::size_t pos = r.UniformIndex(CodepointCount(t) + 1);
            return InsertCharAt(t, pos, letter(r, 0));
          });
    case Kind::kCharSwap:
      return RewriteTokens(
          seq, cfg, rng,
          [](const std::string& t) { return IsWord(t) && CodepointCount(t) >= 2; },
          [](const std::string& t, RandomStream& r) {
            return SwapCharsAt(t, r.UniformIndex(CodepointCount(t) - 1));
          });
    case Kind::kCharDelete:
      return RewriteTokens(
          seq, cfg, rng,
          [](const std::string& t) { return IsWord(t) && CodepointCount(t) >= 2; },
          [](const std::string& t, RandomStream& r) {
            return DeleteCharAt(t, r.UniformIndex(CodepointCount(t)));
          });
    default:
      throw std::invalid_argument("not a character-level kind: " +
                                  std::string(KindName(kind)));
  }
}

ApplyResult ApplyLexicalSwap(const TokenSequence& seq,
                             const PerturbationConfig& cfg,
                             const Lexicons& lex, RandomStream& rng,
                             Kind kind) {
  if (kind != Kind::kSynonym && kind != Kind::kAntonym) {
    throw std::invalid_argument("not a lexical swap kind: " +
                                std::string(KindName(kind)));
  }
  const WordTable& table = kind == Kind::kSynonym ? lex.synonyms : lex.antonyms;
  RequireTable(table, kind);
  return RewriteTokens(
      seq, cfg, rng,
      [&](const std::string& t) {
        const std::string lower = AsciiLower(t);
        return lex.determiners.count(lower) == 0 && table.count(lower) > 0;
      },
      [&](const std::string& t, RandomStream& r) {
        const auto& alts = table.at(AsciiLower(t));
        return MatchCase(t, alts[r.UniformIndex(alts.size())]);
      });
}

ApplyResult Apply(Kind kind, const TokenSequence& seq,
                  const PerturbationConfig& cfg, const Lexicons& lex,
                  RandomStream& rng) {
  switch (kind) {
    case Kind::kOcr:
      return ApplyOcr(seq, cfg, lex, rng);
    case Kind::kSpelling:
      return ApplySpelling(seq, cfg, lex, rng);
    case Kind::kKeyboard:
      return ApplyKeyboard(seq, cfg, lex, rng);
    case Kind::kSplit:
    case Kind::kSwapWord:
    case Kind::kDeleteWord:
      return ApplyWordOps(seq, cfg, rng, kind);
    case Kind::kContextualInsert:
    case Kind::kContextualSubstitute:
      return ApplyContextual(seq, cfg, lex, rng, kind);
    case Kind::kCharSubstitute:
    case Kind::kCharInsert:
    case Kind::kCharSwap:
    case Kind::kCharDelete:
      return ApplyCharOps(seq, cfg, rng, kind);
    case Kind::kSynonym:
    case Kind::kAntonym:
      return ApplyLexicalSwap(seq, cfg, lex, rng, kind);
  }
  throw std::invalid_argument("unknown perturbation kind");
}

ChainOutcome RunChain(std::string_view text, const PerturbationConfig& cfg,
                      const Lexicons& lex, std::string_view pair_id) {
  ChainOutcome out;
  const TokenSequence clean = text::Tokenize(text);
  TokenSequence current = clean;
  for (std::size_t i = 0; i < cfg.kinds.size(); ++i) {
    RandomStream rng(DeriveSeed(cfg.seed, pair_id, i));
    ApplyResult step = Apply(cfg.kinds[i], current, cfg, lex, rng);
    current = step.seq;
    out.steps.push_back(std::move(step));
  }
  PerturbedPair& pair = out.pair;
  pair.id = std::string(pair_id);
  pair.clean = std::string(text);
  pair.corrupt = current.raw;
  pair.applied_kinds = cfg.kinds;
  pair.jaccard = text::JaccardUnigram(clean, current);
  pair.seed = cfg.seed;
  pair.combo_label = ComboLabel(cfg.kinds);
  out.retained = pair.jaccard >= cfg.jaccard_min;
  if (!out.retained) {
    out.discard_reason = "jaccard " + std::to_string(pair.jaccard) +
                         " below threshold " + std::to_string(cfg.jaccard_min);
  }
  return out;
}

std::optional<PerturbedPair> PerturbChain(std::string_view text,
                                          const PerturbationConfig& cfg,
                                          const Lexicons& lex,
                                          std::string_view pair_id) {
  ChainOutcome outcome = RunChain(text, cfg, lex, pair_id);
  if (!outcome.retained) return std::nullopt;
  return std::move(outcome.pair);
}

std::vector<ChainOutcome> PerturbCorpus(const std::vector<std::string>& texts,
                                        const PerturbationConfig& cfg,
                                        const Lexicons& lex, std::size_t jobs) {
  cfg.Validate();
  std::vector<ChainOutcome> out(texts.size());
  ParallelFor(texts.size(), jobs, [&](std::size_t i) {
    out[i] = RunChain(texts[i], cfg, lex, std::to_string(i));
  });
  return out;
}

nlohmann::json ToJson(const PerturbedPair& pair) {
  nlohmann::json kinds = nlohmann::json::array();
  for (Kind k : pair.applied_kinds) kinds.push_back(std::string(KindName(k)));
  return nlohmann::json{{"id", pair.id},
                        {"clean", pair.clean},
                        {"corrupt", pair.corrupt},
                        {"kinds", kinds},
                        {"comboLabel", pair.combo_label},
                        {"jaccard", pair.jaccard},
                        {"seed", pair.seed}};
}

PerturbedPair PairFromJson(const nlohmann::json& j) {
  PerturbedPair pair;
  pair.id = j.at("id").get<std::string>();
  pair.clean = j.at("clean").get<std::string>();
  pair.corrupt = j.at("corrupt").get<std::string>();
  for (const auto& k : j.at("kinds")) {
    pair.applied_kinds.push_back(ParseKind(k.get<std::string>()));
  }
  pair.combo_label = j.at("comboLabel").get<std::string>();
  pair.jaccard = j.at("jaccard").get<double>();
  pair.seed = j.at("seed").get<std::uint64_t>();
  return pair;
}

}  // namespace perturbench::perturb
