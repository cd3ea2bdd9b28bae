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

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "perturbench/corpus.h"
#include "perturbench/errors.h"
#include "perturbench/metrics.h"
#include "test_support.h"

namespace perturbench::metrics {
namespace {

using Tokens = std::vector<std::string>;

Tokens W(const std::string& s) { return text::TokenSequence::FromWhitespace(s).tokens; }

Tokens RandomTokens(std::mt19937& rng, std::size_t max_len) {
  static const Tokens vocab{"a", "b", "c", "d", "e", "f"};
  Tokens t(rng() % (max_len + 1));
  for (auto& w : t) w = vocab[rng() % vocab.size()];
  return t;
}

TEST(ExtractEditsTest, Substitution) {
  const EditSet e = ExtractEdits(W("he go to school"), W("he goes to school"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e.edits[0], (Edit{{1, 2}, "goes"}));
}

TEST(ExtractEditsTest, InsertionAndDeletion) {
  const EditSet ins = ExtractEdits(W("i like cats"), W("i really like cats"));
  ASSERT_EQ(ins.size(), 1u);
  EXPECT_EQ(ins.edits[0].span, (text::Span{1, 1}));
  EXPECT_EQ(ins.edits[0].correction, "really");

  const EditSet del = ExtractEdits(W("i i like cats"), W("i like cats"));
  ASSERT_EQ(del.size(), 1u);
  EXPECT_EQ(del.edits[0].correction, "");
  EXPECT_EQ(del.edits[0].span.end - del.edits[0].span.begin, 1u);
}

TEST(ExtractEditsTest, AdjacentOpsMerge) {
  const EditSet e = ExtractEdits(W("a b c d"), W("a x y d"));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e.edits[0], (Edit{{1, 3}, "x y"}));
}

TEST(ExtractEditsTest, IdenticalGivesEmpty) {
  EXPECT_TRUE(ExtractEdits(W("same words here"), W("same words here")).empty());
}

TEST(ExtractEditsTest, RoundTripOnRandomPairs) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const Tokens s = RandomTokens(rng, 12);
    const Tokens t = RandomTokens(rng, 12);
    const EditSet e = ExtractEdits(s, t);
    EXPECT_EQ(ApplyEdits(s, e), t) << trial;
    for (std::size_t i = 1; i < e.size(); ++i) {
      EXPECT_LE(e.edits[i - 1].span.end, e.edits[i].span.begin);
    }
  }
}

TEST(AlignTest, CostMatchesRecursiveOracle) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Tokens s = RandomTokens(rng, 6);
    const Tokens t = RandomTokens(rng, 6);
    const int expected = oracle::EditDistance(s, t).Solve();
    EXPECT_EQ(static_cast<int>(AlignmentCost(text::Align(s, t))), expected);
    EXPECT_EQ(static_cast<int>(text::DamerauLevenshtein(s, t)), expected);
  }
}

TEST(ApplyEditsTest, RejectsBadEditSets) {
  const Tokens s = W("a b c");
  EXPECT_THROW(ApplyEdits(s, EditSet{{{{0, 4}, "x"}}}), std::invalid_argument);
  EXPECT_THROW(ApplyEdits(s, EditSet{{{{1, 2}, "x"}, {{0, 1}, "y"}}}), std::invalid_argument);
  EXPECT_THROW(ApplyEdits(s, EditSet{{{{0, 2}, "x"}, {{1, 3}, "y"}}}), std::invalid_argument);
}

TEST(MatchEditsTest, ExactSpanAndCorrection) {
  const EditSet ref{{{{1, 2}, "goes"}, {{3, 3}, "the"}}};
  const EditSet hyp{{{{1, 2}, "goes"}, {{3, 3}, "a"}, {{4, 5}, ""}}};
  EXPECT_EQ(MatchEdits(hyp, ref), (EditCounts{1, 2, 1}));
  EXPECT_EQ(MatchEdits(ref, hyp), (EditCounts{1, 1, 2}));
  EXPECT_EQ(MatchEdits(EditSet{}, EditSet{}), (EditCounts{0, 0, 0}));
}

TEST(FBetaTest, HandValues) {
  EXPECT_DOUBLE_EQ(FBeta({2, 1, 2}).fbeta, 0.625);
  EXPECT_DOUBLE_EQ(FBeta({2, 2, 2}).fbeta, 0.5);
  const FBetaScore empty = FBeta({0, 0, 0});
  EXPECT_EQ(empty.precision, 1.0);
  EXPECT_EQ(empty.recall, 1.0);
  EXPECT_EQ(empty.fbeta, 1.0);
  EXPECT_EQ(FBeta({0, 3, 2}).fbeta, 0.0);
}

TEST(FBetaTest, BetaLimits) {
  const EditCounts c{3, 1, 5};
  EXPECT_NEAR(FBeta(c, 1e-6).fbeta, 0.75, 1e-9);
  EXPECT_NEAR(FBeta(c, 1e6).fbeta, 3.0 / 8.0, 1e-9);
  for (double beta : {0.25, 0.5, 1.0, 2.0}) {
    EXPECT_NEAR(FBeta(c, beta).fbeta, oracle::FBeta(3, 1, 5, beta), 1e-12);
  }
}

TEST(ErrantScoreTest, GoldFixture) {
  const corpus::M2Document doc = corpus::LoadM2(testing::Fixture("gold10.m2"));
  const auto hyps = corpus::LoadLines(testing::Fixture("gold10.hyp.txt"));
  const ErrantResult r = ErrantScore(doc, hyps);
  EXPECT_EQ(r.score.tp, 8u);
  EXPECT_EQ(r.score.fp, 3u);
  EXPECT_EQ(r.score.fn, 3u);
  EXPECT_NEAR(r.score.fbeta, oracle::FBeta(8, 3, 3, 0.5), 1e-12);
  ASSERT_EQ(r.per_sentence.size(), 10u);
  const auto j = ErrantReport(r);
  EXPECT_EQ(j.at("metric"), "errant");
  EXPECT_EQ(j.at("perSentence").size(), 10u);
}

TEST(ErrantScoreTest, PicksBestAnnotator) {
  const corpus::M2Document doc = corpus::ParseM2(
      "S a b c\n"
      "A 0 1|||R|||x|||REQUIRED|||-NONE-|||0\n"
      "A 1 2|||R|||y|||REQUIRED|||-NONE-|||1\n");
  const ErrantResult r = ErrantScore(doc, std::vector<std::string>{"a y c"});
  EXPECT_EQ(r.per_sentence[0].annotator, 1);
  EXPECT_EQ(r.score.tp, 1u);
  EXPECT_EQ(r.score.fbeta, 1.0);
}

TEST(ErrantScoreTest, LineCountMismatch) {
  const corpus::M2Document doc = corpus::LoadM2(testing::Fixture("gold10.m2"));
  EXPECT_THROW(ErrantScore(doc, std::vector<std::string>{"one"}), StructuralError);
}

}  // namespace
}  // namespace perturbench::metrics
