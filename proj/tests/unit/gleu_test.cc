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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "perturbench/common.h"
#include "perturbench/corpus.h"
#include "perturbench/metrics.h"
#include "test_support.h"

namespace perturbench::metrics {
namespace {

using text::TokenSequence;

TokenSequence T(const std::string& s) { return TokenSequence::FromWhitespace(s); }

std::vector<std::string> RandomTokens(std::mt19937& rng, std::size_t max_len) {
  static const std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  std::vector<std::string> t(1 + rng() % max_len);
  for (auto& w : t) w = vocab[rng() % vocab.size()];
  return t;
}

TEST(GleuTest, HypothesisEqualToSingleReferenceIsOne) {
  const GleuConfig cfg;
  EXPECT_EQ(Gleu(T("x y z w"), {T("a b c d e")}, T("a b c d e"), cfg), 1.0);
  EXPECT_EQ(Gleu(T("a b c d e"), {T("a b c d e")}, T("a b c d e"), cfg), 1.0);
}

TEST(GleuTest, ShortHypothesisEqualToReferenceIsOne) {
  EXPECT_EQ(Gleu(T("c a"), {T("a b")}, T("a b")), 1.0);
  EXPECT_EQ(Gleu(T("a"), {T("b")}, T("b")), 1.0);
  EXPECT_EQ(Gleu(T("a"), {T("b")}, T("a")), 0.0);
}

TEST(GleuTest, SourceCopyOfErroneousSentence) {
  const auto s = T("i has a dog");
  const auto r = T("i have a dog");
  const double expected = oracle::SentenceGleu(s.tokens, r.tokens, s.tokens);
  EXPECT_EQ(expected, 0.0);
  EXPECT_NEAR(Gleu(s, {r}, s), expected, 1e-9);
}

TEST(GleuTest, BrevityPenalty) {
  const auto s = T("a b c d e f");
  const auto r = T("a b c d e f");
  const auto h = T("a b c d e");
  EXPECT_NEAR(SingleReferenceGleu(s.tokens, r.tokens, h.tokens),
              oracle::SentenceGleu(s.tokens, r.tokens, h.tokens), 1e-12);
  EXPECT_LT(SingleReferenceGleu(s.tokens, r.tokens, h.tokens), 1.0);
}

TEST(GleuTest, MatchesOracleOnRandomCases) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = RandomTokens(rng, 8);
    const auto h = RandomTokens(rng, 8);
    std::vector<TokenSequence> refs;
    std::vector<std::vector<std::string>> ref_tokens;
    const std::size_t nrefs = 1 + rng() % 4;
    for (std::size_t k = 0; k < nrefs; ++k) {
      ref_tokens.push_back(RandomTokens(rng, 8));
      refs.push_back(TokenSequence::FromTokens(ref_tokens.back()));
    }
    GleuConfig cfg;
    cfg.seed = trial;
    const auto draws = GleuReferenceDraws(nrefs, cfg);
    ASSERT_EQ(draws.size(), cfg.iterations);
    const double expected = oracle::SampledGleu(s, ref_tokens, h, draws);
    const double got = Gleu(TokenSequence::FromTokens(s), refs, TokenSequence::FromTokens(h), cfg);
    EXPECT_NEAR(got, expected, 1e-9);
    EXPECT_GE(got, 0.0);
    EXPECT_LE(got, 1.0);
  }
}

TEST(GleuTest, DrawsAreUniformish) {
  GleuConfig cfg;
  cfg.iterations = 4000;
  cfg.seed = 3;
  std::vector<int> hist(4, 0);
  for (std::size_t d : GleuReferenceDraws(4, cfg)) hist.at(d)++;
  for (int h : hist) EXPECT_NEAR(h, 1000, 150);
}

TEST(GleuTest, ReferenceOrderInvariantUnderSameDraws) {
  const auto s = T("he go to school");
  const std::vector<TokenSequence> refs{T("he goes to school"), T("he went to school")};
  const std::vector<TokenSequence> swapped{refs[1], refs[0]};
  const auto h = T("he goes to the school");
  std::vector<std::size_t> draws{0, 1, 1, 0, 1};
  std::vector<std::size_t> mirrored;
  for (auto d : draws) mirrored.push_back(1 - d);
  EXPECT_EQ(GleuWithDraws(s, refs, h, draws), GleuWithDraws(s, swapped, h, mirrored));
}

TEST(GleuTest, Errors) {
  std::vector<std::string> warnings;
  SetWarningSink([&](std::string_view m) { warnings.emplace_back(m); });
  EXPECT_EQ(Gleu(T("a"), {T("a")}, T("")), 0.0);
  SetWarningSink(nullptr);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(Gleu(T("a"), {}, T("a")), std::invalid_argument);
  GleuConfig bad;
  bad.iterations = 0;
  EXPECT_THROW(bad.Validate(), std::invalid_argument);
}

// Corpus score from independently computed per-sentence n-gram statistics.
double OracleCorpusGleu(const std::vector<std::vector<std::string>>& src,
                        const std::vector<std::vector<std::vector<std::string>>>& refs,
                        const std::vector<std::vector<std::string>>& hyp,
                        const GleuConfig& cfg) {
  std::vector<std::vector<std::size_t>> draws;
  for (std::size_t i = 0; i < src.size(); ++i) {
    GleuConfig c = cfg;
    c.seed = DeriveSeed(cfg.seed, "gleu", i);
    draws.push_back(GleuReferenceDraws(refs[i].size(), c));
  }
  double total = 0.0;
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    double hl = 0;
    double rl = 0;
    std::vector<double> num(4, 0.0);
    std::vector<double> den(4, 0.0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const auto& r = refs[i][draws[i][it]];
      hl += hyp[i].size();
      rl += r.size();
      for (std::size_t n = 1; n <= 4; ++n) {
        const auto ch = oracle::CountGrams(hyp[i], n);
        const auto cr = oracle::CountGrams(r, n);
        const auto cs = oracle::CountGrams(src[i], n);
        double sn = 0;
        for (const auto& [g, c] : ch) {
          const int hr = std::min(c, oracle::Get(cr, g));
          const int hs = std::min(c, oracle::Get(cs, g));
          sn += hr - std::max(0, hs - hr);
          den[n - 1] += c;
        }
        num[n - 1] += std::max(0.0, sn);
      }
    }
    double log_sum = 0.0;
    bool zero = hl == 0;
    for (int n = 0; n < 4 && !zero; ++n) {
      if (den[n] == 0) continue;
      if (num[n] <= 0) {
        zero = true;
      } else {
        log_sum += std::log(num[n] / den[n]);
      }
    }
    if (!zero) total += (hl >= rl ? 1.0 : std::exp(1.0 - rl / hl)) * std::exp(log_sum / 4);
  }
  return total / cfg.iterations;
}

TEST(CorpusGleuTest, MatchesOracleOnFixture) {
  using testing::Fixture;
  const corpus::ParallelCorpus pc = corpus::LoadParallel(
      Fixture("mini.src"),
      {Fixture("mini.ref0"), Fixture("mini.ref1"), Fixture("mini.ref2"), Fixture("mini.ref3")});
  const auto hyps = corpus::LoadLines(Fixture("mini.hyp"));
  GleuConfig cfg;
  cfg.seed = 11;
  const CorpusGleuResult r = CorpusGleu(pc, hyps, cfg, 3);

  std::vector<std::vector<std::string>> src;
  std::vector<std::vector<std::vector<std::string>>> refs;
  std::vector<std::vector<std::string>> hyp;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    src.push_back(text::Tokenize(pc.entries[i].source).tokens);
    refs.emplace_back();
    for (const auto& ref : pc.entries[i].references) {
      refs.back().push_back(text::Tokenize(ref).tokens);
    }
    hyp.push_back(text::Tokenize(hyps[i]).tokens);
  }
  EXPECT_NEAR(r.corpus_score, OracleCorpusGleu(src, refs, hyp, cfg), 1e-9);
  ASSERT_EQ(r.per_sentence.size(), pc.size());
  EXPECT_EQ(CorpusGleu(pc, hyps, cfg, 1).corpus_score, r.corpus_score);
}

TEST(CorpusGleuTest, PerfectHypothesesScoreOne) {
  const std::vector<TokenSequence> src{T("a b c d"), T("e f g h i")};
  const std::vector<std::vector<TokenSequence>> refs{{T("a b c x")}, {T("e f g h j")}};
  const std::vector<TokenSequence> hyp{T("a b c x"), T("e f g h j")};
  EXPECT_EQ(CorpusGleu(src, refs, hyp).corpus_score, 1.0);
}

TEST(GleuReportTest, Shape) {
  CorpusGleuResult r{0.5, {0.25, 0.75}};
  const auto j = GleuReport(r);
  EXPECT_EQ(j.at("metric"), "gleu");
  EXPECT_EQ(j.at("corpusScore"), 0.5);
  EXPECT_EQ(j.at("perSentence").size(), 2u);
  EXPECT_NE(RenderScoreTable({{"jfleg", 0.6494}}, "gleu").find("64.9"), std::string::npos);
}

}  // namespace
}  // namespace perturbench::metrics
