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

#ifndef PERTURBENCH_PERTURB_H_
#define PERTURBENCH_PERTURB_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perturbench/common.h"
#include "perturbench/lexicons.h"
#include "perturbench/textcore.h"
#include "json.hpp"

namespace perturbench::perturb {

enum class Kind {
  kOcr,
  kSpelling,
  kKeyboard,
  kSplit,
  kSwapWord,
  kDeleteWord,
  kContextualInsert,
  kContextualSubstitute,
  kCharSubstitute,
  kCharInsert,
  kCharSwap,
  kCharDelete,
  kSynonym,
  kAntonym,
};

inline constexpr Kind kAllKinds[] = {
    Kind::kOcr,           Kind::kSpelling,
    Kind::kKeyboard,      Kind::kSplit,
    Kind::kSwapWord,      Kind::kDeleteWord,
    Kind::kContextualInsert, Kind::kContextualSubstitute,
    Kind::kCharSubstitute, Kind::kCharInsert,
    Kind::kCharSwap,      Kind::kCharDelete,
    Kind::kSynonym,       Kind::kAntonym,
};

// camelCase name, e.g. "swapWord".
std::string_view KindName(Kind kind);

// Accepts camelCase, snake_case or kebab-case names (case-insensitive) and
// the single-letter codes o, s, k, d, c, a. Throws std::invalid_argument.
Kind ParseKind(std::string_view name);

// First character of each kind's name.
std::string ComboLabel(std::span<const Kind> kinds);

// "o,k;o,k,s,c,d" -> {{ocr, keyboard}, {ocr, keyboard, spelling, ...}}.
std::vector<std::vector<Kind>> ParseCombos(std::string_view spec);
std::vector<Kind> ParseCombo(std::string_view spec);

// All size-k subsets of `kinds`, in lexicographic order of positions.
std::vector<std::vector<Kind>> EnumerateCombos(std::span<const Kind> kinds,
                                               std::size_t k);

struct PerturbationConfig {
  std::vector<Kind> kinds;
  double prob_per_token = 0.30;
  std::size_t max_affected_words = 10;
  double jaccard_min = 0.70;
  std::uint64_t seed = 0;
  // Contextual augmenters draw from the first k neighbours.
  std::size_t contextual_top_k = 5;

  // Throws std::invalid_argument on violated bounds.
  void Validate() const;
};

// Result of one augmenter application.
struct ApplyResult {
  text::TokenSequence seq;
  std::size_t eligible = 0;  // tokens the augmenter could act on
  std::size_t selected = 0;  // Bernoulli successes kept after the budget cap
  std::size_t modified = 0;  // tokens actually changed, inserted or removed
};

// One Bernoulli(prob) draw per eligible position, in order; the first
// `max_selected` successes are kept.
std::vector<std::size_t> SelectPositions(std::span<const std::size_t> eligible,
                                         double prob, std::size_t max_selected,
                                         RandomStream& rng);

ApplyResult ApplyOcr(const text::TokenSequence& seq,
                     const PerturbationConfig& cfg, const Lexicons& lex,
                     RandomStream& rng);
ApplyResult ApplySpelling(const text::TokenSequence& seq,
                          const PerturbationConfig& cfg, const Lexicons& lex,
                          RandomStream& rng);
ApplyResult ApplyKeyboard(const text::TokenSequence& seq,
                          const PerturbationConfig& cfg, const Lexicons& lex,
                          RandomStream& rng);
// kind: kSplit, kSwapWord or kDeleteWord.
ApplyResult ApplyWordOps(const text::TokenSequence& seq,
                         const PerturbationConfig& cfg, RandomStream& rng,
                         Kind kind);
// kind: kContextualInsert or kContextualSubstitute. Throws ConfigError when
// neither a neighbour table nor a provider is available.
ApplyResult ApplyContextual(const text::TokenSequence& seq,
                            const PerturbationConfig& cfg, const Lexicons& lex,
                            RandomStream& rng, Kind kind);
// kind: kCharSubstitute, kCharInsert, kCharSwap or kCharDelete.
ApplyResult ApplyCharOps(const text::TokenSequence& seq,
                         const PerturbationConfig& cfg, RandomStream& rng,
                         Kind kind);
// kind: kSynonym or kAntonym. Determiners are never replaced.
ApplyResult ApplyLexicalSwap(const text::TokenSequence& seq,
                             const PerturbationConfig& cfg,
                             const Lexicons& lex, RandomStream& rng, Kind kind);

// Dispatches to the family function for `kind`.
ApplyResult Apply(Kind kind, const text::TokenSequence& seq,
                  const PerturbationConfig& cfg, const Lexicons& lex,
                  RandomStream& rng);

// Positional primitives used by the augmenters (positions in code points).
std::string SplitTokenAt(std::string_view token, std::size_t pos);
std::string SwapCharsAt(std::string_view token, std::size_t pos);
std::string DeleteCharAt(std::string_view token, std::size_t pos);
std::string InsertCharAt(std::string_view token, std::size_t pos, char c);
text::TokenSequence SwapWordsAt(const text::TokenSequence& seq,
                                std::size_t index);

struct PerturbedPair {
  std::string id;
  std::string clean;
  std::string corrupt;
  std::vector<Kind> applied_kinds;
  double jaccard = 1.0;
  std::uint64_t seed = 0;
  std::string combo_label;
};

struct ChainOutcome {
  PerturbedPair pair;
  bool retained = false;
  std::string discard_reason;  // empty when retained
  std::vector<ApplyResult> steps;
};

// Applies cfg.kinds in order; step i draws from a stream seeded with
// DeriveSeed(cfg.seed, pair_id, i). The pair is retained iff the unigram
// Jaccard between clean and corrupt is >= cfg.jaccard_min.
ChainOutcome RunChain(std::string_view text, const PerturbationConfig& cfg,
                      const Lexicons& lex, std::string_view pair_id);

std::optional<PerturbedPair> PerturbChain(std::string_view text,
                                          const PerturbationConfig& cfg,
                                          const Lexicons& lex,
                                          std::string_view pair_id);

// Runs the chain over every sentence (ids are the decimal indices) with up
// to `jobs` threads. Output order and content do not depend on `jobs`.
std::vector<ChainOutcome> PerturbCorpus(const std::vector<std::string>& texts,
                                        const PerturbationConfig& cfg,
                                        const Lexicons& lex,
                                        std::size_t jobs = 1);

nlohmann::json ToJson(const PerturbedPair& pair);
PerturbedPair PairFromJson(const nlohmann::json& j);

}  // namespace perturbench::perturb

#endif  // PERTURBENCH_PERTURB_H_
