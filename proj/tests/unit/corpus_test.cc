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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "perturbench/common.h"
#include "perturbench/errors.h"
#include "test_support.h"

namespace perturbench::corpus {
namespace {

using testing::Fixture;
using testing::ScratchDir;

TEST(M2Test, ParsesFixture) {
  const M2Document doc = LoadM2(Fixture("gold10.m2"));
  ASSERT_EQ(doc.size(), 10u);
  const M2Sentence& s0 = doc.sentences[0];
  EXPECT_EQ(s0.source.tokens.size(), 7u);
  ASSERT_EQ(s0.annotations.size(), 1u);
  EXPECT_EQ(s0.annotations[0].span, (text::Span{1, 2}));
  EXPECT_EQ(s0.annotations[0].correction, "goes");
  EXPECT_EQ(s0.annotations[0].type, "R:VERB:SVA");

  const M2Sentence& noop = doc.sentences[3];
  EXPECT_TRUE(noop.annotations[0].noop);
  ASSERT_EQ(noop.annotator_edits.count(0), 1u);
  EXPECT_TRUE(noop.annotator_edits.at(0).edits.empty());

  const M2Sentence& deletion = doc.sentences[2];
  EXPECT_EQ(deletion.annotations[0].correction, "");

  const M2Sentence& multi = doc.sentences[5];
  EXPECT_EQ(multi.annotator_edits.size(), 2u);
  EXPECT_EQ(multi.annotator_edits.at(1).edits.size(), 2u);
}

TEST(M2Test, RoundTripIsByteExact) {
  const std::string original = ReadFile(Fixture("gold10.m2"));
  EXPECT_EQ(SerializeM2(ParseM2(original)), original);
}

TEST(M2Test, ReportsLineOfBadSpan) {
  const std::string bad = "S a b\nA 0 1|||X|||c|||REQUIRED|||-NONE-|||0\n\nS c\nA 0 5|||X|||d|||REQUIRED|||-NONE-|||0\n";
  try {
    ParseM2(bad);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(M2Test, RejectsMalformedLines) {
  EXPECT_THROW(ParseM2("A 0 1|||X|||c|||REQUIRED|||-NONE-|||0\n"), ParseError);
  EXPECT_THROW(ParseM2("S a\nA 0 1|||X\n"), ParseError);
  EXPECT_THROW(ParseM2("Q what\n"), ParseError);
}

TEST(ParallelTest, LoadsAndRoundTrips) {
  const std::vector<std::string> refs{Fixture("mini.ref0"), Fixture("mini.ref1"),
                                      Fixture("mini.ref2"), Fixture("mini.ref3")};
  const ParallelCorpus pc = LoadParallel(Fixture("mini.src"), refs);
  ASSERT_EQ(pc.size(), 10u);
  EXPECT_EQ(pc.entries[0].references.size(), 4u);

  ScratchDir dir;
  std::vector<std::string> out_refs;
  for (int i = 0; i < 4; ++i) out_refs.push_back(dir.File("r" + std::to_string(i)));
  WriteParallel(pc, dir.File("src"), out_refs);
  EXPECT_EQ(ReadFile(dir.File("src")), ReadFile(Fixture("mini.src")));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(ReadFile(out_refs[i]), ReadFile(refs[i]));
}

TEST(ParallelTest, LineCountMismatchNamesFile) {
  ScratchDir dir;
  WriteFile(dir.File("short.ref"), "only one line\n");
  try {
    LoadParallel(Fixture("mini.src"), {dir.File("short.ref")});
    FAIL() << "expected StructuralError";
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("short.ref"), std::string::npos);
  }
}

TEST(CsvTest, QuotedFieldsAndEmbeddedNewlines) {
  const auto rows = ParseCsv("a,b\n\"x, y\",\"say \"\"hi\"\"\nthere\"\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x, y");
  EXPECT_EQ(rows[1][1], "say \"hi\"\nthere");
  EXPECT_THROW(ParseCsv("a\n\"open"), ParseError);
}

TEST(ReviewsTest, LoadsReviewColumnAndStripsMarkup) {
  const auto docs = LoadDocuments(Fixture("reviews.csv"));
  ASSERT_EQ(docs.size(), 8u);
  EXPECT_EQ(docs[0].find("<br"), std::string::npos);
  EXPECT_NE(docs[4].find("\"okay\""), std::string::npos);
}

TEST(ReviewsTest, SamplingIsSeededSortedAndClamped) {
  const auto a = SampleIndices(100, 10, 5);
  EXPECT_EQ(a, SampleIndices(100, 10, 5));
  EXPECT_NE(a, SampleIndices(100, 10, 6));
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  EXPECT_EQ(SampleIndices(3, 10, 1).size(), 3u);

  const ReviewSample sample = LoadReviews(Fixture("reviews.csv"), 4, 1);
  EXPECT_EQ(sample.corpus_size, 8u);
  EXPECT_EQ(sample.documents.size(), 4u);
  EXPECT_GE(sample.sentences.size(), 4u);
}

TEST(SplitSentencesTest, SplitsOnTerminalPunctuation) {
  EXPECT_EQ(SplitSentences("One. Two! Three? Four"),
            (std::vector<std::string>{"One.", "Two!", "Three?", "Four"}));
  EXPECT_EQ(SplitSentences("e.g.this stays"), (std::vector<std::string>{"e.g.this stays"}));
}

TEST(StatsTest, CountsAndTable) {
  const M2Document doc = LoadM2(Fixture("gold10.m2"));
  const CorpusStats m2 = Stats(doc, "gold");
  EXPECT_EQ(m2.pair_count, 10u);
  EXPECT_EQ(m2.ref_distribution.at(1), 9u);
  EXPECT_EQ(m2.ref_distribution.at(2), 1u);
  const std::string table = RenderStatsTable({m2});
  EXPECT_NE(table.find("gold"), std::string::npos);
  EXPECT_NE(table.find("10"), std::string::npos);
}

}  // namespace
}  // namespace perturbench::corpus
