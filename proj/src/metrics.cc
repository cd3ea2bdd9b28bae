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

#include "perturbench/metrics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "perturbench/common.h"
#include "perturbench/errors.h"

namespace perturbench::metrics {

// ---------------------------------------------------------------- GLEU

void GleuConfig::Validate() const {
  if (max_n < 1) throw std::invalid_argument("GLEU max_n must be >= 1");
  if (iterations < 1) throw std::invalid_argument("GLEU iterations must be >= 1");
}

GleuStats& GleuStats::operator+=(const GleuStats& other) {
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  if (numerators.size() < other.numerators.size()) {
    numerators.resize(other.numerators.size(), 0.0);
    denominators.resize(other.denominators.size(), 0.0);
  }
  for (std::size_t i = 0; i < other.numerators.size(); ++i) {
    numerators[i] += other.numerators[i];
    denominators[i] += other.denominators[i];
  }
  return *this;
}

GleuStats ComputeGleuStats(const std::vector<std::string>& source,
                           const std::vector<std::string>& reference,
                           const std::vector<std::string>& hypothesis,
                           std::size_t max_n) {
  GleuStats st;
  st.hyp_len = hypothesis.size();
  st.ref_len = reference.size();
  for (std::size_t n = 1; n <= max_n; ++n) {
    const text::NGramBag h = text::NGrams(hypothesis, n);
    const text::NGramBag r = text::NGrams(reference, n);
    const text::NGramBag s = text::NGrams(source, n);
    double num = 0.0;
    for (const auto& [gram, ch] : h.counts) {
      const double hr = static_cast<double>(std::min(ch, r.Count(gram)));
      const double hs = static_cast<double>(std::min(ch, s.Count(gram)));
      num += hr - std::max(0.0, hs - hr);
    }
    st.numerators.push_back(std::max(0.0, num));
    st.denominators.push_back(static_cast<double>(h.Total()));
  }
  return st;
}

double GleuFromStats(const GleuStats& st) {
  if (st.hyp_len == 0 || st.numerators.empty()) return 0.0;
  double log_sum = 0.0;
  for (std::size_t i = 0; i < st.numerators.size(); ++i) {
    // An order with no hypothesis n-grams is vacuously precise (p_n = 1).
    if (st.denominators[i] <= 0.0) continue;
    if (st.numerators[i] <= 0.0) return 0.0;
    log_sum += std::log(st.numerators[i] / st.denominators[i]);
  }
  const double h = static_cast<double>(st.hyp_len);
  const double r = static_cast<double>(st.ref_len);
  const double bp = h >= r ? 1.0 : std::exp(1.0 - r / h);
  return bp * std::exp(log_sum / static_cast<double>(st.numerators.size()));
}

double SingleReferenceGleu(const std::vector<std::string>& source,
                           const std::vector<std::string>& reference,
                           const std::vector<std::string>& hypothesis,
                           std::size_t max_n) {
  return GleuFromStats(ComputeGleuStats(source, reference, hypothesis, max_n));
}

std::vector<std::size_t> GleuReferenceDraws(std::size_t num_references,
                                            const GleuConfig& cfg) {
  cfg.Validate();
  if (num_references == 0) {
    throw std::invalid_argument("GLEU needs at least one reference");
  }
  RandomStream rng(cfg.seed);
  std::vector<std::size_t> draws(cfg.iterations);
  for (std::size_t& d : draws) d = rng.UniformIndex(num_references);
  return draws;
}

namespace {

// Per-reference statistics, computed once and reused across iterations.
std::vector<GleuStats> StatsPerReference(
    const std::vector<std::string>& source,
    const std::vector<text::TokenSequence>& references,
    const std::vector<std::string>& hypothesis, std::size_t max_n) {
  std::vector<GleuStats> out;
  out.reserve(references.size());
  for (const auto& r : references) {
    out.push_back(ComputeGleuStats(source, r.tokens, hypothesis, max_n));
  }
  return out;
}

double MeanOverDraws(const std::vector<GleuStats>& per_ref,
                     const std::vector<std::size_t>& draws) {
  std::vector<double> scores(per_ref.size());
  for (std::size_t r = 0; r < per_ref.size(); ++r) {
    scores[r] = GleuFromStats(per_ref[r]);
  }
  double sum = 0.0;
  for (std::size_t d : draws) sum += scores.at(d);
  return sum / static_cast<double>(draws.size());
}

}  // namespace

double GleuWithDraws(const text::TokenSequence& source,
                     const std::vector<text::TokenSequence>& references,
                     const text::TokenSequence& hypothesis,
                     const std::vector<std::size_t>& draws, std::size_t max_n) {
  if (references.empty()) {
    throw std::invalid_argument("GLEU needs at least one reference");
  }
  if (draws.empty()) throw std::invalid_argument("GLEU needs at least one draw");
  if (hypothesis.empty()) {
    Warn("GLEU of an empty hypothesis is 0");
    return 0.0;
  }
  return MeanOverDraws(
      StatsPerReference(source.tokens, references, hypothesis.tokens, max_n),
      draws);
}

double Gleu(const text::TokenSequence& source,
            const std::vector<text::TokenSequence>& references,
            const text::TokenSequence& hypothesis, const GleuConfig& cfg) {
  if (references.empty()) {
    throw std::invalid_argument("GLEU needs at least one reference");
  }
  return GleuWithDraws(source, references, hypothesis,
                       GleuReferenceDraws(references.size(), cfg), cfg.max_n);
}

CorpusGleuResult CorpusGleu(
    const std::vector<text::TokenSequence>& sources,
    const std::vector<std::vector<text::TokenSequence>>& references,
    const std::vector<text::TokenSequence>& hypotheses, const GleuConfig& cfg,
    std::size_t jobs) {
  cfg.Validate();
  if (sources.size() != references.size() ||
      sources.size() != hypotheses.size()) {
    throw std::invalid_argument("GLEU: sources, references and hypotheses differ in length");
  }
  const std::size_t n = sources.size();
  std::vector<std::vector<GleuStats>> per_ref(n);
  std::vector<std::vector<std::size_t>> draws(n);
  CorpusGleuResult result;
  result.per_sentence.assign(n, 0.0);
  std::size_t empty_hyps = 0;
  for (const auto& h : hypotheses) empty_hyps += h.empty() ? 1 : 0;
  if (empty_hyps > 0) {
    Warn(std::to_string(empty_hyps) + " empty hypotheses score 0");
  }
  ParallelFor(n, jobs, [&](std::size_t i) {
    if (references[i].empty()) {
      throw std::invalid_argument("sentence " + std::to_string(i) +
                                  " has no references");
    }
    GleuConfig sentence_cfg = cfg;
    sentence_cfg.seed = DeriveSeed(cfg.seed, "gleu", i);
    draws[i] = GleuReferenceDraws(references[i].size(), sentence_cfg);
    per_ref[i] = StatsPerReference(sources[i].tokens, references[i],
                                   hypotheses[i].tokens, cfg.max_n);
    result.per_sentence[i] =
        hypotheses[i].empty() ? 0.0 : MeanOverDraws(per_ref[i], draws[i]);
  });
  if (n == 0) return result;
  double sum = 0.0;
  for (std::size_t t = 0; t < cfg.iterations; ++t) {
    GleuStats total;
    for (std::size_t i = 0; i < n; ++i) total += per_ref[i][draws[i][t]];
    sum += GleuFromStats(total);
  }
  result.corpus_score = sum / static_cast<double>(cfg.iterations);
  return result;
}

CorpusGleuResult CorpusGleu(const corpus::ParallelCorpus& corpus,
                            const std::vector<std::string>& hypotheses,
                            const GleuConfig& cfg, std::size_t jobs) {
  if (hypotheses.size() != corpus.size()) {
    throw StructuralError("hypothesis file has " +
                          std::to_string(hypotheses.size()) +
                          " lines, corpus has " + std::to_string(corpus.size()));
  }
  std::vector<text::TokenSequence> src;
  std::vector<std::vector<text::TokenSequence>> refs;
  std::vector<text::TokenSequence> hyp;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& e = corpus.entries[i];
    src.push_back(text::Tokenize(e.source));
    refs.emplace_back();
    for (const auto& r : e.references) refs.back().push_back(text::Tokenize(r));
    hyp.push_back(text::Tokenize(hypotheses[i]));
  }
  return CorpusGleu(src, refs, hyp, cfg, jobs);
}

// ------------------------------------------------------------ edits / F

EditSet ExtractEdits(const std::vector<std::string>& source,
                     const std::vector<std::string>& corrected) {
  const std::vector<text::AlignmentOp> ops = text::Align(source, corrected);
  EditSet out;
  std::size_t i = 0;
  while (i < ops.size()) {
    if (ops[i].kind == text::OpKind::kMatch) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < ops.size() && ops[j + 1].kind != text::OpKind::kMatch) ++j;
    const text::Span src{ops[i].src.begin, ops[j].src.end};
    const text::Span tgt{ops[i].tgt.begin, ops[j].tgt.end};
    std::vector<std::string> words(corrected.begin() + tgt.begin,
                                   corrected.begin() + tgt.end);
    out.edits.push_back({src, JoinStrings(words, " ")});
    i = j + 1;
  }
  return out;
}

EditSet ExtractEdits(const text::TokenSequence& source,
                     const text::TokenSequence& corrected) {
  return ExtractEdits(source.tokens, corrected.tokens);
}

std::vector<std::string> ApplyEdits(const std::vector<std::string>& source,
                                    const EditSet& edits) {
  std::vector<std::string> out;
  std::size_t cursor = 0;
  for (const Edit& e : edits.edits) {
    if (e.span.begin < cursor || e.span.end < e.span.begin ||
        e.span.end > source.size()) {
      throw std::invalid_argument("edit span " + std::to_string(e.span.begin) +
                                  " " + std::to_string(e.span.end) +
                                  " is unsorted, overlapping or out of range");
    }
    out.insert(out.end(), source.begin() + cursor, source.begin() + e.span.begin);
    for (std::string& w : SplitString(e.correction, ' ')) {
      if (!w.empty()) out.push_back(std::move(w));
    }
    cursor = e.span.end;
  }
  out.insert(out.end(), source.begin() + cursor, source.end());
  return out;
}

EditCounts MatchEdits(const EditSet& hyp, const EditSet& ref) {
  std::multiset<Edit> pool(ref.edits.begin(), ref.edits.end());
  EditCounts c;
  for (const Edit& e : hyp.edits) {
    auto it = pool.find(e);
    if (it != pool.end()) {
      ++c.tp;
      pool.erase(it);
    } else {
      ++c.fp;
    }
  }
  c.fn = pool.size();
  return c;
}

FBetaScore FBeta(const EditCounts& c, double beta) {
  FBetaScore s;
  s.tp = c.tp;
  s.fp = c.fp;
  s.fn = c.fn;
  s.beta = beta;
  const double tp = static_cast<double>(c.tp);
  s.precision = c.tp + c.fp == 0 ? 1.0 : tp / static_cast<double>(c.tp + c.fp);
  s.recall = c.tp + c.fn == 0 ? 1.0 : tp / static_cast<double>(c.tp + c.fn);
  const double b2 = beta * beta;
  const double denom = b2 * s.precision + s.recall;
  s.fbeta = denom == 0.0 ? 0.0 : (1.0 + b2) * s.precision * s.recall / denom;
  return s;
}

namespace {

// True if `a` beats `b` as a running corpus total.
bool Better(const EditCounts& a, const EditCounts& b, double beta) {
  const double fa = FBeta(a, beta).fbeta;
  const double fb = FBeta(b, beta).fbeta;
  if (fa != fb) return fa > fb;
  if (a.tp != b.tp) return a.tp > b.tp;
  if (a.fp != b.fp) return a.fp < b.fp;
  return a.fn < b.fn;
}

}  // namespace

ErrantResult ErrantScore(const corpus::M2Document& doc,
                         const std::vector<EditSet>& hypothesis_edits,
                         double beta) {
  if (hypothesis_edits.size() != doc.size()) {
    throw StructuralError("hypothesis has " +
                          std::to_string(hypothesis_edits.size()) +
                          " sentences, M2 file has " + std::to_string(doc.size()));
  }
  ErrantResult result;
  EditCounts total;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const corpus::M2Sentence& s = doc.sentences[i];
    SentenceErrant best;
    best.hypothesis_edits = hypothesis_edits[i];
    if (s.annotator_edits.empty()) {
      best.counts = MatchEdits(hypothesis_edits[i], EditSet{});
    } else {
      bool first = true;
      EditCounts best_total;
      for (const auto& [annotator, ref] : s.annotator_edits) {
        const EditCounts c = MatchEdits(hypothesis_edits[i], ref);
        EditCounts candidate = total;
        candidate += c;
        if (first || Better(candidate, best_total, beta)) {
          first = false;
          best_total = candidate;
          best.annotator = annotator;
          best.counts = c;
        }
      }
    }
    total += best.counts;
    result.per_sentence.push_back(std::move(best));
  }
  result.score = FBeta(total, beta);
  return result;
}

ErrantResult ErrantScore(const corpus::M2Document& doc,
                         const std::vector<std::string>& hypotheses,
                         double beta) {
  if (hypotheses.size() != doc.size()) {
    throw StructuralError("hypothesis file has " +
                          std::to_string(hypotheses.size()) +
                          " lines, M2 file has " + std::to_string(doc.size()));
  }
  std::vector<EditSet> edits;
  edits.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    edits.push_back(ExtractEdits(doc.sentences[i].source.tokens,
                                 text::Tokenize(hypotheses[i]).tokens));
  }
  return ErrantScore(doc, edits, beta);
}

// ------------------------------------------------------------ agreement

std::size_t RatingsMatrix::raters() const {
  if (counts.empty()) return 0;
  std::size_t n = 0;
  for (std::size_t c : counts.front()) n += c;
  for (const auto& row : counts) {
    std::size_t s = 0;
    for (std::size_t c : row) s += c;
    if (s != n) throw std::invalid_argument("ratings rows have different rater counts");
    if (row.size() != counts.front().size()) {
      throw std::invalid_argument("ratings rows have different category counts");
    }
  }
  return n;
}

double FleissKappa(const RatingsMatrix& m) {
  if (m.items() == 0) throw std::invalid_argument("Fleiss kappa needs at least one item");
  const std::size_t n = m.raters();
  if (n < 2) throw std::invalid_argument("Fleiss kappa needs at least two raters");
  const std::size_t big_n = m.items();
  const std::size_t k = m.categories();
  const double nn = static_cast<double>(n);

  double p_bar = 0.0;
  std::vector<std::size_t> column(k, 0);
  for (const auto& row : m.counts) {
    std::size_t sq = 0;
    for (std::size_t j = 0; j < k; ++j) {
      sq += row[j] * row[j];
      column[j] += row[j];
    }
    p_bar += static_cast<double>(sq - n) / (nn * (nn - 1.0));
  }
  p_bar /= static_cast<double>(big_n);

  const double total = static_cast<double>(big_n * n);
  double p_e = 0.0;
  bool degenerate = false;
  for (std::size_t c : column) {
    const double p = static_cast<double>(c) / total;
    p_e += p * p;
    if (c == big_n * n) degenerate = true;
  }
  if (degenerate) {
    if (p_bar == 1.0) return 1.0;
    throw UndefinedKappa("chance agreement is 1 without perfect agreement");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

std::string_view PreferenceName(Preference p) {
  switch (p) {
    case Preference::kSystem:
      return "system";
    case Preference::kHuman:
      return "human";
    case Preference::kSame:
      return "same";
    case Preference::kUndecided:
      return "undecided";
  }
  return "undecided";
}

Preference ParsePreference(std::string_view name) {
  const std::string lower = AsciiLower(Trim(name));
  for (Preference p : kAllPreferences) {
    if (lower == PreferenceName(p)) return p;
  }
  throw std::invalid_argument("unknown preference '" + std::string(name) + "'");
}

std::optional<double> AnnotatorStats::SystemPreference() const {
  if (system + human == 0) return std::nullopt;
  return static_cast<double>(system) / static_cast<double>(system + human);
}

std::optional<double> AnnotatorStats::SystemPreferenceAll() const {
  if (total() == 0) return std::nullopt;
  return static_cast<double>(system) / static_cast<double>(total());
}

namespace {

// item -> annotator -> choice, for one dataset.
using ItemLabels = std::map<std::string, std::map<std::string, Preference>>;

std::map<std::string, ItemLabels> GroupRecords(
    const std::vector<PreferenceRecord>& records) {
  std::map<std::string, ItemLabels> out;
  for (const auto& r : records) {
    auto& labels = out[r.dataset][r.item_id];
    if (!labels.emplace(r.annotator_id, r.choice).second) {
      throw std::invalid_argument("duplicate label for item '" + r.item_id +
                                  "' by annotator '" + r.annotator_id + "'");
    }
  }
  return out;
}

std::size_t ExpectedRaters(const ItemLabels& items, std::size_t requested) {
  if (requested > 0) return requested;
  std::size_t n = 0;
  for (const auto& [id, labels] : items) n = std::max(n, labels.size());
  return n;
}

double ItemPairAgreement(const std::map<std::string, Preference>& labels) {
  std::vector<Preference> v;
  for (const auto& [a, p] : labels) v.push_back(p);
  std::size_t agree = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      ++pairs;
      agree += v[i] == v[j] ? 1 : 0;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

// Aggregates complete items (possibly from several datasets).
DatasetAgreement Summarize(
    const std::string& name,
    const std::vector<const std::map<std::string, Preference>*>& items,
    std::size_t raters_per_item, std::size_t excluded) {
  DatasetAgreement d;
  d.dataset = name;
  d.items = items.size();
  d.excluded_items = excluded;
  d.raters_per_item = raters_per_item;
  std::size_t same = 0;
  std::size_t undecided = 0;
  std::size_t total = 0;
  RatingsMatrix m;
  double iaa_sum = 0.0;
  for (const auto* labels : items) {
    std::vector<std::size_t> row(std::size(kAllPreferences), 0);
    for (const auto& [annotator, p] : *labels) {
      AnnotatorStats& a = d.annotators[annotator];
      switch (p) {
        case Preference::kSystem:
          ++a.system;
          break;
        case Preference::kHuman:
          ++a.human;
          break;
        case Preference::kSame:
          ++a.same;
          ++same;
          break;
        case Preference::kUndecided:
          ++a.undecided;
          ++undecided;
          break;
      }
      ++total;
      ++row[static_cast<std::size_t>(p)];
    }
    m.counts.push_back(std::move(row));
    if (raters_per_item >= 2) iaa_sum += ItemPairAgreement(*labels);
  }
  if (total > 0) {
    d.same_rate = static_cast<double>(same) / static_cast<double>(total);
    d.undecided_rate = static_cast<double>(undecided) / static_cast<double>(total);
  }
  double pref_sum = 0.0;
  double pref_all_sum = 0.0;
  std::size_t pref_n = 0;
  std::size_t pref_all_n = 0;
  for (const auto& [annotator, a] : d.annotators) {
    if (auto p = a.SystemPreference()) {
      pref_sum += *p;
      ++pref_n;
    }
    if (auto p = a.SystemPreferenceAll()) {
      pref_all_sum += *p;
      ++pref_all_n;
    }
  }
  if (pref_n > 0) d.mean_system_preference = pref_sum / static_cast<double>(pref_n);
  if (pref_all_n > 0) {
    d.mean_system_preference_all = pref_all_sum / static_cast<double>(pref_all_n);
  }
  if (raters_per_item >= 2 && !items.empty()) {
    d.iaa = iaa_sum / static_cast<double>(items.size());
    try {
      d.kappa = FleissKappa(m);
    } catch (const UndefinedKappa& e) {
      Warn(name + ": " + e.what());
    }
  }
  return d;
}

}  // namespace

AgreementSummary AgreementStats(const std::vector<PreferenceRecord>& records,
                                std::size_t raters_per_item) {
  AgreementSummary summary;
  std::vector<const std::map<std::string, Preference>*> all_items;
  std::set<std::size_t> rater_counts;
  std::size_t all_excluded = 0;
  const auto grouped = GroupRecords(records);
  for (const auto& [dataset, items] : grouped) {
    const std::size_t n = ExpectedRaters(items, raters_per_item);
    std::vector<const std::map<std::string, Preference>*> complete;
    std::size_t excluded = 0;
    for (const auto& [id, labels] : items) {
      if (labels.size() == n) {
        complete.push_back(&labels);
      } else {
        ++excluded;
      }
    }
    if (excluded > 0) {
      Warn(dataset + ": " + std::to_string(excluded) +
           " items without exactly " + std::to_string(n) +
           " labels excluded from agreement statistics");
    }
    summary.datasets.push_back(Summarize(dataset, complete, n, excluded));
    all_items.insert(all_items.end(), complete.begin(), complete.end());
    rater_counts.insert(n);
    all_excluded += excluded;
  }
  const std::size_t pooled_n = rater_counts.size() == 1 ? *rater_counts.begin() : 0;
  summary.overall = Summarize("all", all_items, pooled_n, all_excluded);
  if (rater_counts.size() > 1) {
    // Pairwise agreement is still defined item by item.
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto* labels : all_items) {
      if (labels->size() >= 2) {
        sum += ItemPairAgreement(*labels);
        ++count;
      }
    }
    if (count > 0) summary.overall.iaa = sum / static_cast<double>(count);
  }
  return summary;
}

RatingsMatrix BuildRatingsMatrix(const std::vector<PreferenceRecord>& records,
                                 std::size_t raters_per_item) {
  RatingsMatrix m;
  for (const auto& [dataset, items] : GroupRecords(records)) {
    for (const auto& [id, labels] : items) {
      if (labels.size() != raters_per_item) continue;
      std::vector<std::size_t> row(std::size(kAllPreferences), 0);
      for (const auto& [a, p] : labels) ++row[static_cast<std::size_t>(p)];
      m.counts.push_back(std::move(row));
    }
  }
  return m;
}

std::optional<double> PairwiseAgreement(
    const std::vector<PreferenceRecord>& records, std::size_t raters_per_item) {
  if (raters_per_item < 2) return std::nullopt;
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [dataset, items] : GroupRecords(records)) {
    for (const auto& [id, labels] : items) {
      if (labels.size() != raters_per_item) continue;
      sum += ItemPairAgreement(labels);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

namespace {

std::string JsonString(const nlohmann::json& j, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (j.contains(k)) {
      const auto& v = j.at(k);
      return v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return std::string();
}

}  // namespace

std::vector<PreferenceRecord> LoadPreferenceRecords(const std::string& path) {
  std::vector<PreferenceRecord> out;
  std::string lower = AsciiLower(path);
  if (lower.size() >= 4 && lower.substr(lower.size() - 4) == ".csv") {
    const auto rows = corpus::ParseCsv(ReadFile(path));
    if (rows.empty()) return out;
    std::map<std::string, std::size_t> col;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
      col[AsciiLower(Trim(rows[0][c]))] = c;
    }
    for (const char* need : {"itemid", "annotatorid", "choice"}) {
      if (col.count(need) == 0) {
        throw ParseError(path + ": CSV header lacks column " + need, 1);
      }
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      auto get = [&](const std::string& name) -> std::string {
        auto it = col.find(name);
        return it == col.end() || it->second >= row.size() ? "" : row[it->second];
      };
      try {
        out.push_back({get("itemid"), get("annotatorid"),
                       ParsePreference(get("choice")), get("dataset")});
      } catch (const std::invalid_argument& e) {
        throw ParseError(path + ": " + e.what(), r + 1);
      }
    }
    return out;
  }
  const std::vector<std::string> lines = ReadLines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(lines[i]);
      if (j.contains("format")) continue;  // export header
      if (j.contains("labels")) {
        const std::string item = JsonString(j, {"taskId", "itemId"});
        const std::string dataset = JsonString(j, {"dataset"});
        for (const auto& l : j.at("labels")) {
          out.push_back({item, JsonString(l, {"annotatorId", "annotator"}),
                         ParsePreference(JsonString(l, {"resolvedChoice", "choice"})),
                         dataset});
        }
        continue;
      }
      out.push_back({JsonString(j, {"itemId", "taskId"}),
                     JsonString(j, {"annotatorId", "annotator"}),
                     ParsePreference(JsonString(j, {"choice", "resolvedChoice"})),
                     JsonString(j, {"dataset"})});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": " + e.what(), i + 1);
    } catch (const std::invalid_argument& e) {
      throw ParseError(path + ": " + e.what(), i + 1);
    }
  }
  return out;
}

// ------------------------------------------------------------ output

nlohmann::json ToJson(const FBetaScore& s) {
  return {{"tp", s.tp},         {"fp", s.fp},         {"fn", s.fn},
          {"beta", s.beta},     {"precision", s.precision},
          {"recall", s.recall}, {"fbeta", s.fbeta}};
}

namespace {

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json ToJson(const DatasetAgreement& d) {
  nlohmann::json annotators = nlohmann::json::object();
  for (const auto& [id, a] : d.annotators) {
    annotators[id] = {{"system", a.system},
                      {"human", a.human},
                      {"same", a.same},
                      {"undecided", a.undecided},
                      {"systemPreference", OptionalJson(a.SystemPreference())},
                      {"systemPreferenceAll", OptionalJson(a.SystemPreferenceAll())}};
  }
  return {{"dataset", d.dataset},
          {"items", d.items},
          {"excludedItems", d.excluded_items},
          {"ratersPerItem", d.raters_per_item},
          {"annotators", annotators},
          {"meanSystemPreference", OptionalJson(d.mean_system_preference)},
          {"meanSystemPreferenceAll", OptionalJson(d.mean_system_preference_all)},
          {"sameRate", d.same_rate},
          {"undecidedRate", d.undecided_rate},
          {"iaa", OptionalJson(d.iaa)},
          {"kappa", OptionalJson(d.kappa)}};
}

}  // namespace

nlohmann::json ToJson(const AgreementSummary& s) {
  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& d : s.datasets) datasets.push_back(ToJson(d));
  return {{"datasets", datasets}, {"overall", ToJson(s.overall)}};
}

nlohmann::json GleuReport(const CorpusGleuResult& r) {
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < r.per_sentence.size(); ++i) {
    per.push_back({{"id", std::to_string(i)}, {"score", r.per_sentence[i]}});
  }
  return {{"metric", "gleu"}, {"corpusScore", r.corpus_score}, {"perSentence", per}};
}

nlohmann::json ErrantReport(const ErrantResult& r) {
  nlohmann::json per = nlohmann::json::array();
  for (std::size_t i = 0; i < r.per_sentence.size(); ++i) {
    const auto& s = r.per_sentence[i];
    nlohmann::json edits = nlohmann::json::array();
    for (const Edit& e : s.hypothesis_edits.edits) {
      edits.push_back({{"start", e.span.begin}, {"end", e.span.end},
                       {"correction", e.correction}});
    }
    per.push_back({{"id", std::to_string(i)},
                   {"annotator", s.annotator},
                   {"tp", s.counts.tp},
                   {"fp", s.counts.fp},
                   {"fn", s.counts.fn},
                   {"edits", edits}});
  }
  nlohmann::json out = ToJson(r.score);
  return {{"metric", "errant"},
          {"corpusScore", r.score.fbeta},
          {"counts", out},
          {"perSentence", per}};
}

namespace {

std::string PadRight(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string PadLeft(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string Percent(const std::optional<double>& v) {
  return v ? FormatFixed(100.0 * *v, 2) : "-";
}

}  // namespace

std::string RenderPreferenceTable(const AgreementSummary& s) {
  std::size_t k = 0;
  std::size_t w0 = std::string("Dataset").size();
  for (const auto& d : s.datasets) {
    k = std::max(k, d.annotators.size());
    w0 = std::max(w0, d.dataset.size());
  }
  const std::size_t w = 8;
  std::string out = PadRight("Dataset", w0);
  for (std::size_t a = 0; a < k; ++a) out += "  " + PadLeft("Ann " + std::to_string(a + 1), w);
  out += "  " + PadLeft("Mean", w) + "\n";
  for (const auto& d : s.datasets) {
    out += PadRight(d.dataset, w0);
    std::size_t a = 0;
    for (const auto& [id, st] : d.annotators) {
      out += "  " + PadLeft(Percent(st.SystemPreference()), w);
      ++a;
    }
    for (; a < k; ++a) out += "  " + PadLeft("-", w);
    out += "  " + PadLeft(Percent(d.mean_system_preference), w) + "\n";
  }
  return out;
}

std::string RenderAgreementText(const AgreementSummary& s) {
  std::string out = RenderPreferenceTable(s);
  out += "\n";
  auto line = [&](const DatasetAgreement& d) {
    out += d.dataset + ": items " + std::to_string(d.items);
    if (d.excluded_items > 0) {
      out += " (+" + std::to_string(d.excluded_items) + " excluded)";
    }
    out += ", kappa " + (d.kappa ? FormatFixed(*d.kappa, 2) : std::string("-"));
    out += ", IAA " + Percent(d.iaa);
    out += ", same " + FormatFixed(100.0 * d.same_rate, 2);
    out += ", undecided " + FormatFixed(100.0 * d.undecided_rate, 2);
    out += ", preference incl. same/undecided " +
           Percent(d.mean_system_preference_all) + "\n";
  };
  for (const auto& d : s.datasets) line(d);
  if (s.datasets.size() > 1) line(s.overall);
  return out;
}

std::string RenderScoreTable(
    const std::vector<std::pair<std::string, double>>& rows,
    std::string_view metric) {
  std::size_t w0 = std::string("Dataset").size();
  for (const auto& [name, v] : rows) w0 = std::max(w0, name.size());
  std::string header(metric);
  for (char& c : header) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const std::size_t w1 = std::max<std::size_t>(header.size(), 6);
  std::string out = PadRight("Dataset", w0) + "  " + PadLeft(header, w1) + "\n";
  for (const auto& [name, v] : rows) {
    out += PadRight(name, w0) + "  " + PadLeft(FormatFixed(100.0 * v, 1), w1) + "\n";
  }
  return out;
}

}  // namespace perturbench::metrics
