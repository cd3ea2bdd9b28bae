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

#include "perturbench/common.h"

#include <atomic>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_support.h"

namespace perturbench {
namespace {

TEST(DeriveSeedTest, StableAndSensitive) {
  EXPECT_EQ(DeriveSeed(7, "a", 0), DeriveSeed(7, "a", 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s : {0, 1}) {
    for (const char* id : {"a", "b"}) {
      for (std::uint64_t i : {0, 1}) seen.insert(DeriveSeed(s, id, i));
    }
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(Fnv1aTest, KnownVector) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(RandomStreamTest, UniformRanges) {
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.UniformReal();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.UniformIndex(7), 7u);
  }
}

TEST(RandomStreamTest, BernoulliRate) {
  RandomStream rng(2);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) hits += rng.Bernoulli(0.3) ? 1 : 0;
  EXPECT_NEAR(hits / 20000.0, 0.3, 0.015);
}

TEST(Utf8Test, CodepointStarts) {
  EXPECT_EQ(CodepointStarts("aé b"), (std::vector<std::size_t>{0, 1, 3, 4}));
  EXPECT_EQ(DecodeUtf8("é").size(), 1u);
  EXPECT_EQ(EncodeUtf8(U'é'), "é");
}

TEST(StringsTest, SplitJoinTrim) {
  EXPECT_EQ(SplitString("a,,b", ','), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(JoinStrings({"x", "y"}, "-"), "x-y");
  EXPECT_EQ(Trim("  hi \n"), "hi");
  EXPECT_EQ(AsciiLower("AbC"), "abc");
  EXPECT_EQ(FormatFixed(0.126, 2), "0.13");
  EXPECT_EQ(FormatFixed(64.94, 1), "64.9");
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelForTest, RethrowsWorkerException) {
  EXPECT_THROW(ParallelFor(10, 3,
                           [](std::size_t i) {
                             if (i == 5) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

TEST(FilesTest, ReadLinesHandlesCrLfAndFinalNewline) {
  testing::ScratchDir dir;
  WriteFile(dir.File("a.txt"), "one\r\ntwo\n\nfour\n");
  EXPECT_EQ(ReadLines(dir.File("a.txt")),
            (std::vector<std::string>{"one", "two", "", "four"}));
  EXPECT_THROW(ReadFile(dir.File("missing.txt")), std::runtime_error);
}

TEST(WarnTest, SinkCapturesMessages) {
  std::vector<std::string> got;
  SetWarningSink([&](std::string_view m) { got.emplace_back(m); });
  Warn("careful");
  SetWarningSink(nullptr);
  EXPECT_EQ(got, (std::vector<std::string>{"careful"}));
}

}  // namespace
}  // namespace perturbench
