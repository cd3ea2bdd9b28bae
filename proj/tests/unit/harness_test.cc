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

#include "perturbench/harness.h"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "perturbench/common.h"
#include "perturbench/corpus.h"
#include "perturbench/errors.h"
#include "perturbench/metrics.h"
#include "test_support.h"

namespace perturbench::harness {
namespace {

using perturb::Kind;

std::vector<std::string> Sentences(std::size_t n) {
  std::vector<std::string> all = corpus::LoadLines(testing::Fixture("sents200.txt"));
  all.resize(std::min(n, all.size()));
  return all;
}

LscRunConfig SmallConfig() {
  LscRunConfig cfg;
  cfg.corpus_name = "small";
  cfg.sentences = Sentences(30);
  cfg.combos = {{Kind::kSpelling}, {Kind::kKeyboard}, {Kind::kOcr, Kind::kSpelling}};
  cfg.provider = embed::ProviderSpec::Local(256);
  cfg.seed = 7;
  cfg.jobs = 2;
  return cfg;
}

TEST(GroupSentencesTest, CeilUnits) {
  const std::vector<std::string> s{"a.", "b.", "c.", "d.", "e."};
  EXPECT_EQ(GroupSentences(s, 2), (std::vector<std::string>{"a. b.", "c. d.", "e."}));
  EXPECT_EQ(GroupSentences(s, 1).size(), 5u);
  EXPECT_EQ(GroupSentences(s, 9).size(), 1u);
  EXPECT_THROW(GroupSentences(s, 0), std::invalid_argument);
}

TEST(RunLscTest, RecordsAndSummary) {
  const LscRunConfig cfg = SmallConfig();
  const LscRun run = RunLsc(cfg);
  ASSERT_EQ(run.records.size(), 3u * 30u);
  ASSERT_EQ(run.summary.combos.size(), 3u);
  EXPECT_EQ(run.summary.combos[0].combo_label, "s");
  EXPECT_EQ(run.summary.combos[2].combo_label, "os");

  for (std::size_t c = 0; c < 3; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    std::size_t discarded = 0;
    for (const auto& r : run.records) {
      if (r.combo_index != c) continue;
      if (r.retained) {
        ASSERT_TRUE(r.similarity.has_value());
        EXPECT_GE(r.jaccard, cfg.jaccard_min);
        sum += *r.similarity;
        ++n;
      } else {
        ++discarded;
      }
    }
    const ComboSummary& s = run.summary.combos[c];
    EXPECT_EQ(s.sample_count, n);
    EXPECT_EQ(s.discarded_count, discarded);
    if (n > 0) {
      EXPECT_NEAR(s.mean, sum / n, 1e-12);
    }
  }
  ASSERT_EQ(run.summary.sizes.size(), 2u);
  EXPECT_EQ(run.summary.sizes[0].size, 1u);
  EXPECT_EQ(run.summary.sizes[1].size, 2u);
}

TEST(RunLscTest, GroupedUnits) {
  LscRunConfig cfg = SmallConfig();
  cfg.sentences = Sentences(31);
  cfg.group_size = 4;
  cfg.combos = {{Kind::kSpelling}};
  const LscRun run = RunLsc(cfg);
  EXPECT_EQ(run.summary.units, 8u);
  EXPECT_EQ(run.records.size(), 8u);
}

TEST(RunLscTest, IdentityGivesOne) {
  LscRunConfig cfg = SmallConfig();
  cfg.identity = true;
  for (const auto& r : RunLsc(cfg).records) {
    if (r.retained) {
      EXPECT_EQ(*r.similarity, 1.0);
    }
  }
}

TEST(RunLscTest, DeterministicAcrossJobCounts) {
  LscRunConfig a = SmallConfig();
  LscRunConfig b = SmallConfig();
  a.jobs = 1;
  b.jobs = 4;
  const LscRun ra = RunLsc(a);
  const LscRun rb = RunLsc(b);
  ASSERT_EQ(ra.records.size(), rb.records.size());
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    EXPECT_EQ(ToJson(ra.records[i]), ToJson(rb.records[i]));
  }
}

TEST(RunLscTest, ResumesFromCheckpoint) {
  testing::ScratchDir dir;
  LscRunConfig cfg = SmallConfig();
  cfg.run_dir = dir.File("run");
  const LscRun full = RunLsc(cfg);
  const std::string records = *cfg.run_dir + "/records.jsonl";
  std::vector<std::string> lines = ReadLines(records);
  ASSERT_EQ(lines.size(), full.records.size());
  // Keep a prefix plus a torn line.
  std::string partial;
  for (std::size_t i = 0; i < 40; ++i) partial += lines[i] + "\n";
  partial += lines[40].substr(0, lines[40].size() / 2);
  WriteFile(records, partial);

  const LscRun resumed = RunLsc(cfg);
  ASSERT_EQ(resumed.records.size(), full.records.size());
  for (std::size_t i = 0; i < full.records.size(); ++i) {
    EXPECT_EQ(ToJson(resumed.records[i]), ToJson(full.records[i])) << i;
  }
  EXPECT_EQ(ToJson(resumed.summary), ToJson(full.summary));
}

TEST(RunLscTest, ConfigMismatchRefusesRunDir) {
  testing::ScratchDir dir;
  LscRunConfig cfg = SmallConfig();
  cfg.combos = {{Kind::kSpelling}};
  cfg.run_dir = dir.File("run");
  RunLsc(cfg);
  cfg.seed = 8;
  EXPECT_THROW(RunLsc(cfg), ConfigError);
}

TEST(RunLscTest, InvalidConfig) {
  LscRunConfig cfg = SmallConfig();
  cfg.combos.clear();
  EXPECT_THROW(RunLsc(cfg), std::invalid_argument);
  cfg = SmallConfig();
  cfg.sentences.clear();
  EXPECT_THROW(RunLsc(cfg), std::invalid_argument);
}

TEST(LscRecordTest, JsonRoundTrip) {
  LscRecord r;
  r.combo_index = 2;
  r.unit_index = 5;
  r.pair_id = "2:5";
  r.combo_label = "ok";
  r.provider = "local";
  r.clean = "a b";
  r.corrupt = "a c";
  r.jaccard = 0.5;
  r.seed = 99;
  r.retained = true;
  r.similarity = 0.8;
  EXPECT_EQ(ToJson(LscRecordFromJson(ToJson(r))), ToJson(r));
}

TEST(RenderLscTableTest, ContainsCombosAndMeans) {
  ComboSummary c;
  c.combo_label = "ok";
  c.kinds = {Kind::kOcr, Kind::kKeyboard};
  c.mean = 0.9123;
  c.std_dev = 0.01;
  c.sample_count = 10;
  LscSummary s;
  s.corpus_name = "demo";
  s.provider = "local";
  s.combos = {c};
  s.sizes = {{2, 0.9123, 0.01, 10, 0}};
  const std::string table = RenderLscTable({s});
  EXPECT_NE(table.find("demo"), std::string::npos);
  EXPECT_NE(RenderComboTable(s).find("ok"), std::string::npos);
}

TEST(PromptTest, RenderAndExtractRoundTrip) {
  const PromptTemplate t = PromptTemplate::Default();
  const std::string sentence = "She go to school yesterday .";
  const RenderedPrompt p = RenderPrompt(sentence, t);
  EXPECT_NE(p.text.find(sentence), std::string::npos);
  EXPECT_FALSE(p.delimiter_in_input);
  EXPECT_EQ(ExtractInput(p.text, t), sentence);

  const RenderedPrompt d = RenderPrompt("a ### b", t);
  EXPECT_TRUE(d.delimiter_in_input);
  EXPECT_EQ(ExtractInput(d.text, t), "a ### b");
  EXPECT_THROW(RenderPrompt("", t), std::invalid_argument);
}

TEST(PromptTest, TemplateValidation) {
  EXPECT_THROW(PromptTemplate::FromText("no placeholder"), ConfigError);
  EXPECT_THROW(PromptTemplate::FromText("{input_sentence} {input_sentence}"), ConfigError);
  EXPECT_NO_THROW(PromptTemplate::FromText("Fix: {input_sentence}"));
}

TEST(ExtractAnswerTest, StripsLabelsQuotesAndFences) {
  EXPECT_EQ(ExtractAnswer("She went home.").text, "She went home.");
  EXPECT_EQ(ExtractAnswer("Corrected sentence: She went home.").text, "She went home.");
  EXPECT_EQ(ExtractAnswer("\"She went home.\"").text, "She went home.");
  EXPECT_EQ(ExtractAnswer("```\nShe went home.\n```").text, "She went home.");
  EXPECT_EQ(ExtractAnswer("### She went home. ###").text, "She went home.");

  const ExtractedAnswer multi = ExtractAnswer("She went home.\nI fixed the verb.");
  EXPECT_EQ(multi.text, "She went home.");
  EXPECT_EQ(multi.flags, (std::vector<std::string>{"multi-line"}));
  EXPECT_EQ(ExtractAnswer("  \n").flags, (std::vector<std::string>{"empty"}));
}

TEST(ChatProviderTest, HttpRequestAndReplyShapes) {
  ChatRequest req{"prompt text", "src", {}};
  const auto j = HttpChatProvider::BuildRequest("m1", req);
  EXPECT_EQ(j.at("model"), "m1");
  EXPECT_EQ(j.at("messages")[0].at("content"), "prompt text");
  EXPECT_EQ(j.at("temperature"), 0.0);
  EXPECT_EQ(j.at("max_tokens"), 1000);

  EXPECT_EQ(HttpChatProvider::ParseReply(nlohmann::json::parse(
                R"({"choices":[{"message":{"role":"assistant","content":"hi"}}]})")),
            "hi");
  EXPECT_EQ(HttpChatProvider::ParseReply(nlohmann::json::parse(R"({"choices":[{"text":"t"}]})")),
            "t");
  EXPECT_THROW(HttpChatProvider::ParseReply(nlohmann::json::parse(R"({"x":1})")),
               ProtocolError);
}

TEST(GenerationParamsTest, Validation) {
  GenerationParams p;
  p.max_tokens = 0;
  EXPECT_THROW(p.Validate(), std::invalid_argument);
}

class FlakyProvider : public ChatProvider {
 public:
  std::string id() const override { return "flaky"; }
  ChatResponse Complete(const ChatRequest& r) override {
    ++calls;
    if (r.source == "bad") throw TransportError("down");
    return {"Answer: " + r.source, 1.0};
  }
  std::atomic<int> calls{0};
};

TEST(RunLecTest, IdentityReproducesSources) {
  const std::vector<std::string> src = corpus::LoadLines(testing::Fixture("mini.src"));
  IdentityChatProvider identity;
  LecRunConfig cfg;
  cfg.jobs = 3;
  const auto results = RunLec(ItemsFromSources(src), identity, cfg);
  ASSERT_EQ(results.size(), src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    EXPECT_EQ(results[i].hypothesis, src[i]);
    EXPECT_EQ(results[i].id, std::to_string(i));
    EXPECT_FALSE(results[i].error.has_value());
  }
}

TEST(RunLecTest, ErrorsRecordedAndRetriedOnResume) {
  testing::ScratchDir dir;
  LecRunConfig cfg;
  cfg.run_dir = dir.File("lec");
  FlakyProvider provider;
  const std::vector<LecItem> items{{"0", "good one"}, {"1", "bad"}, {"2", "good two"}};
  const auto first = RunLec(items, provider, cfg);
  EXPECT_EQ(first[0].hypothesis, "good one");
  ASSERT_TRUE(first[1].error.has_value());
  EXPECT_EQ(first[1].hypothesis, "");
  EXPECT_EQ(provider.calls, 3);
  EXPECT_EQ(ReadLines(*cfg.run_dir + "/hypotheses.txt"),
            (std::vector<std::string>{"good one", "", "good two"}));

  const auto second = RunLec(items, provider, cfg);
  EXPECT_EQ(provider.calls, 4);  // only the failed item is retried
  EXPECT_EQ(second[2].hypothesis, "good two");
}

TEST(CorrectionResultTest, JsonRoundTrip) {
  CorrectionResult r{"7", "src", "hyp", "p", 12.5, "raw", {"multi-line"}, std::string("e")};
  EXPECT_EQ(ToJson(CorrectionFromJson(ToJson(r))), ToJson(r));
}

}  // namespace
}  // namespace perturbench::harness
