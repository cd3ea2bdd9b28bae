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

#ifndef PERTURBENCH_METRICS_H_
#define PERTURBENCH_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perturbench/corpus.h"
#include "perturbench/edits.h"
#include "perturbench/textcore.h"
#include "json.hpp"

namespace perturbench::metrics {

// ---------------------------------------------------------------- GLEU

struct GleuConfig {
  std::size_t max_n = 4;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Sufficient statistics of one (source, reference, hypothesis) triple.
struct GleuStats {
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
  std::vector<double> numerators;    // clipped at 0, one per order
  std::vector<double> denominators;  // hypothesis n-gram totals

  GleuStats& operator+=(const GleuStats& other);
};

GleuStats ComputeGleuStats(const std::vector<std::string>& source,
                           const std::vector<std::string>& reference,
                           const std::vector<std::string>& hypothesis,
                           std::size_t max_n);

// BP * exp(mean_n log p_n); 0 when any p_n is 0. Orders without hypothesis
// n-grams count as p_n = 1.
double GleuFromStats(const GleuStats& stats);

// GLEU against one reference.
double SingleReferenceGleu(const std::vector<std::string>& source,
                           const std::vector<std::string>& reference,
                           const std::vector<std::string>& hypothesis,
                           std::size_t max_n = 4);

// Reference index drawn in each iteration (uniform, seeded by cfg.seed).
std::vector<std::size_t> GleuReferenceDraws(std::size_t num_references,
                                            const GleuConfig& cfg);

// Mean single-reference GLEU over the given draws.
double GleuWithDraws(const text::TokenSequence& source,
                     const std::vector<text::TokenSequence>& references,
                     const text::TokenSequence& hypothesis,
                     const std::vector<std::size_t>& draws,
                     std::size_t max_n = 4);

// Sentence GLEU: mean over cfg.iterations of single-reference GLEU with a
// seeded reference draw per iteration. Empty hypothesis gives 0 with a
// warning; no references throws std::invalid_argument.
double Gleu(const text::TokenSequence& source,
            const std::vector<text::TokenSequence>& references,
            const text::TokenSequence& hypothesis,
            const GleuConfig& cfg = {});

struct CorpusGleuResult {
  double corpus_score = 0.0;            // in [0, 1]
  std::vector<double> per_sentence;     // sentence GLEU, same draws
};

// Corpus GLEU: in every iteration the statistics of all sentences (each with
// its own seeded reference draw) are summed before the score is formed; the
// corpus score is the mean over iterations. Sentence i draws with seed
// DeriveSeed(cfg.seed, "gleu", i).
CorpusGleuResult CorpusGleu(const std::vector<text::TokenSequence>& sources,
                            const std::vector<std::vector<text::TokenSequence>>&
                                references,
                            const std::vector<text::TokenSequence>& hypotheses,
                            const GleuConfig& cfg = {}, std::size_t jobs = 1);

// Tokenizes a parallel corpus and hypothesis lines and runs CorpusGleu.
CorpusGleuResult CorpusGleu(const corpus::ParallelCorpus& corpus,
                            const std::vector<std::string>& hypotheses,
                            const GleuConfig& cfg = {}, std::size_t jobs = 1);

// ------------------------------------------------------------ edits / F

// Aligns the token sequences and merges maximal runs of non-match ops into
// single edits.
EditSet ExtractEdits(const std::vector<std::string>& source,
                     const std::vector<std::string>& corrected);
EditSet ExtractEdits(const text::TokenSequence& source,
                     const text::TokenSequence& corrected);

// Throws std::invalid_argument for unsorted, overlapping or out-of-range
// edits.
std::vector<std::string> ApplyEdits(const std::vector<std::string>& source,
                                    const EditSet& edits);

struct EditCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  EditCounts& operator+=(const EditCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Exact matches on span and correction string.
EditCounts MatchEdits(const EditSet& hyp, const EditSet& ref);

struct FBetaScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double beta = 0.5;
  double precision = 1.0;
  double recall = 1.0;
  double fbeta = 1.0;
};

FBetaScore FBeta(const EditCounts& counts, double beta = 0.5);

struct SentenceErrant {
  int annotator = 0;  // reference annotator chosen for this sentence
  EditCounts counts;
  EditSet hypothesis_edits;
};

struct ErrantResult {
  FBetaScore score;
  std::vector<SentenceErrant> per_sentence;
};

// For each sentence, picks the annotator whose counts, added to the running
// totals, give the best corpus F (ties: more tp, fewer fp, fewer fn, lower
// id). Sentences without annotators score against an empty reference.
ErrantResult ErrantScore(const corpus::M2Document& doc,
                         const std::vector<EditSet>& hypothesis_edits,
                         double beta = 0.5);

// Tokenizes hypothesis lines and extracts their edits against the M2 sources.
ErrantResult ErrantScore(const corpus::M2Document& doc,
                         const std::vector<std::string>& hypotheses,
                         double beta = 0.5);

// ------------------------------------------------------------ agreement

struct RatingsMatrix {
  // counts[i][j]: raters who put item i in category j.
  std::vector<std::vector<std::size_t>> counts;

  std::size_t items() const { return counts.size(); }
  std::size_t categories() const {
    return counts.empty() ? 0 : counts.front().size();
  }
  // Raters per item; throws std::invalid_argument if rows differ.
  std::size_t raters() const;
};

// Throws std::invalid_argument for fewer than 2 raters or no items, and
// UndefinedKappa when chance agreement is 1 without perfect agreement.
double FleissKappa(const RatingsMatrix& m);

enum class Preference { kSystem, kHuman, kSame, kUndecided };

inline constexpr Preference kAllPreferences[] = {
    Preference::kSystem, Preference::kHuman, Preference::kSame,
    Preference::kUndecided};

std::string_view PreferenceName(Preference p);
Preference ParsePreference(std::string_view name);

struct PreferenceRecord {
  std::string item_id;
  std::string annotator_id;
  Preference choice = Preference::kUndecided;
  std::string dataset;
};

struct AnnotatorStats {
  std::size_t system = 0;
  std::size_t human = 0;
  std::size_t same = 0;
  std::size_t undecided = 0;

  std::size_t total() const { return system + human + same + undecided; }
  // system / (system + human); nullopt without decisive records.
  std::optional<double> SystemPreference() const;
  // system / total; nullopt without records.
  std::optional<double> SystemPreferenceAll() const;
};

struct DatasetAgreement {
  std::string dataset;
  std::size_t items = 0;           // items with a complete rater set
  std::size_t excluded_items = 0;  // items with missing raters
  std::size_t raters_per_item = 0;
  std::map<std::string, AnnotatorStats> annotators;
  std::optional<double> mean_system_preference;      // excludes same/undecided
  std::optional<double> mean_system_preference_all;  // includes them
  double same_rate = 0.0;
  double undecided_rate = 0.0;
  std::optional<double> iaa;    // pairwise, complete items only
  std::optional<double> kappa;  // complete items only
};

struct AgreementSummary {
  std::vector<DatasetAgreement> datasets;  // sorted by name
  DatasetAgreement overall;                // all datasets pooled
};

// `raters_per_item` of 0 uses the largest label count seen per item in each
// dataset. Items with fewer labels are excluded from IAA and kappa with a
// warning. Throws std::invalid_argument on duplicate (item, annotator).
AgreementSummary AgreementStats(const std::vector<PreferenceRecord>& records,
                                std::size_t raters_per_item = 0);

// Ratings matrix over the four preference categories for complete items.
RatingsMatrix BuildRatingsMatrix(const std::vector<PreferenceRecord>& records,
                                 std::size_t raters_per_item);

// Mean over items of the fraction of agreeing rater pairs.
std::optional<double> PairwiseAgreement(
    const std::vector<PreferenceRecord>& records, std::size_t raters_per_item);

// Reads a labels file: JSON lines with itemId, annotatorId, choice, dataset,
// or CSV with those columns.
std::vector<PreferenceRecord> LoadPreferenceRecords(const std::string& path);

// ------------------------------------------------------------ output

nlohmann::json ToJson(const FBetaScore& s);
nlohmann::json ToJson(const AgreementSummary& s);

// {metric, corpusScore, perSentence[]}
nlohmann::json GleuReport(const CorpusGleuResult& r);
nlohmann::json ErrantReport(const ErrantResult& r);

// Dataset rows, Ann 1..k and Mean columns, percentages to two decimals.
std::string RenderPreferenceTable(const AgreementSummary& s);
std::string RenderAgreementText(const AgreementSummary& s);
// One row per metric, scores x100 to one decimal.
std::string RenderScoreTable(
    const std::vector<std::pair<std::string, double>>& rows,
    std::string_view metric);

}  // namespace perturbench::metrics

#endif  // PERTURBENCH_METRICS_H_
