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

// Offline acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"
#include "oracles.h"
#include "perturbench/annotation.h"
#include "perturbench/cli.h"
#include "perturbench/common.h"
#include "perturbench/corpus.h"
#include "perturbench/harness.h"
#include "perturbench/metrics.h"
#include "perturbench/perturb.h"
#include "test_support.h"

namespace perturbench::acceptance {
namespace {

using Tokens = std::vector<std::string>;
using testing::Fixture;

enum class Outcome { kPass, kFail };

struct Verdict {
  Outcome outcome = Outcome::kPass;
  std::string detail;
};

class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  Verdict Done(std::string summary) const {
    if (failed_ == 0) return {Outcome::kPass, std::move(summary)};
    std::string d = std::to_string(failed_) + " check(s) failed";
    for (const auto& f : failures_) d += "; " + f;
    return {Outcome::kFail, d};
  }

 private:
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

Tokens RandomTokens(std::mt19937& rng, std::size_t min_len, std::size_t max_len,
                    std::size_t vocab_size) {
  Tokens t(min_len + rng() % (max_len - min_len + 1));
  for (auto& w : t) w = std::string(1, static_cast<char>('a' + rng() % vocab_size));
  return t;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

Verdict GleuOracle() {
  const auto start = std::chrono::steady_clock::now();
  Checker c;
  std::mt19937 rng(20240601);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Tokens s = RandomTokens(rng, 1, 8, 5);
    const Tokens h = RandomTokens(rng, 1, 8, 5);
    std::vector<Tokens> refs;
    std::vector<text::TokenSequence> ref_seqs;
    for (std::size_t k = 0, n = 1 + rng() % 4; k < n; ++k) {
      refs.push_back(RandomTokens(rng, 1, 8, 5));
      ref_seqs.push_back(text::TokenSequence::FromTokens(refs.back()));
    }
    metrics::GleuConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(trial);
    const double expected =
        oracle::SampledGleu(s, refs, h, metrics::GleuReferenceDraws(refs.size(), cfg));
    const double got = metrics::Gleu(text::TokenSequence::FromTokens(s), ref_seqs,
                                     text::TokenSequence::FromTokens(h), cfg);
    worst = std::max(worst, std::abs(got - expected));
    c.Expect(std::abs(got - expected) <= 1e-9, "case " + std::to_string(trial));

    // Hypothesis equal to the (single) reference.
    const double same = metrics::Gleu(text::TokenSequence::FromTokens(s), {ref_seqs[0]},
                                      ref_seqs[0], cfg);
    c.Expect(same == 1.0, "hyp=ref case " + std::to_string(trial) + " gave " +
                              FormatFixed(same, 12));
  }
  const double secs = Seconds(start);
  c.Expect(secs < 60.0, "runtime " + FormatFixed(secs, 1) + "s");
  return c.Done("50 cases, max |diff| " + FormatFixed(worst, 12) + ", hyp=ref -> 1.0");
}

Verdict EditRoundTrip() {
  Checker c;
  std::mt19937 rng(77);
  std::size_t dp_checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Tokens s = RandomTokens(rng, 0, 12, 6);
    const Tokens t = RandomTokens(rng, 0, 12, 6);
    const metrics::EditSet edits = metrics::ExtractEdits(s, t);
    c.Expect(metrics::ApplyEdits(s, edits) == t, "round trip " + std::to_string(trial));
    if (s.size() <= 6 && t.size() <= 6) {
      ++dp_checked;
      const int expected = oracle::EditDistance(s, t).Solve();
      c.Expect(static_cast<int>(text::AlignmentCost(text::Align(s, t))) == expected,
               "alignment cost " + std::to_string(trial));
    }
  }
  // Dense sampling of short pairs over a 3-word vocabulary.
  for (int trial = 0; trial < 2000; ++trial) {
    const Tokens s = RandomTokens(rng, 0, 6, 3);
    const Tokens t = RandomTokens(rng, 0, 6, 3);
    ++dp_checked;
    c.Expect(static_cast<int>(text::AlignmentCost(text::Align(s, t))) ==
                 oracle::EditDistance(s, t).Solve(),
             "small pair " + std::to_string(trial));
    c.Expect(metrics::ApplyEdits(s, metrics::ExtractEdits(s, t)) == t,
             "small round trip " + std::to_string(trial));
  }
  return c.Done("500 pairs round-trip; " + std::to_string(dp_checked) +
                " short pairs match the DP oracle");
}

Verdict FBetaFixture() {
  Checker c;
  const corpus::M2Document doc = corpus::LoadM2(Fixture("gold10.m2"));
  c.Expect(doc.size() == 10, "fixture has " + std::to_string(doc.size()) + " sentences");
  bool multi = false;
  for (const auto& s : doc.sentences) multi |= s.annotator_edits.size() > 1;
  c.Expect(multi, "fixture lacks a multi-annotator sentence");
  const metrics::ErrantResult r =
      metrics::ErrantScore(doc, corpus::LoadLines(Fixture("gold10.hyp.txt")));
  c.Expect(r.score.tp == 8 && r.score.fp == 3 && r.score.fn == 3,
           "counts " + std::to_string(r.score.tp) + "/" + std::to_string(r.score.fp) + "/" +
               std::to_string(r.score.fn));
  // Closed form: (1 + b^2) tp / ((1 + b^2) tp + b^2 fn + fp).
  const double closed = 1.25 * 8 / (1.25 * 8 + 0.25 * 3 + 3);
  c.Expect(std::abs(r.score.fbeta - closed) <= 1e-12, "F0.5 " + FormatFixed(r.score.fbeta, 15));
  const double small = metrics::FBeta({2, 1, 2}).fbeta;
  c.Expect(std::abs(small - 0.625) <= 1e-12, "tp=2,fp=1,fn=2 gave " + FormatFixed(small, 15));
  return c.Done("TP 8 FP 3 FN 3, F0.5 " + FormatFixed(r.score.fbeta, 6) + "; 2/1/2 -> 0.625");
}

Verdict FleissOracle() {
  Checker c;
  std::mt19937 rng(4242);
  int checked = 0;
  double worst = 0.0;
  while (checked < 100) {
    const std::size_t items = 1 + rng() % 20;
    const std::size_t k = 2 + rng() % 3;
    const int n = 2 + static_cast<int>(rng() % 4);
    std::vector<std::vector<int>> rows(items, std::vector<int>(k, 0));
    std::vector<int> column(k, 0);
    for (auto& row : rows) {
      for (int r = 0; r < n; ++r) {
        const std::size_t cat = rng() % k;
        ++row[cat];
        ++column[cat];
      }
    }
    bool degenerate = false;
    for (int col : column) degenerate |= col == static_cast<int>(items) * n;
    if (degenerate) continue;
    metrics::RatingsMatrix m;
    for (const auto& row : rows) m.counts.emplace_back(row.begin(), row.end());
    const double diff = std::abs(metrics::FleissKappa(m) - oracle::FleissKappa(rows));
    worst = std::max(worst, diff);
    c.Expect(diff <= 1e-9, "matrix " + std::to_string(checked));
    ++checked;
  }
  metrics::RatingsMatrix perfect;
  perfect.counts = {{5, 0, 0, 0}, {0, 5, 0, 0}, {0, 0, 5, 0}, {0, 0, 0, 5}, {5, 0, 0, 0}};
  c.Expect(metrics::FleissKappa(perfect) == 1.0, "perfect agreement");
  return c.Done("100 matrices, max |diff| " + FormatFixed(worst, 12) + ", perfect -> 1.0");
}

// Deterministic synthetic corpus of simple declarative sentences.
std::vector<std::string> SyntheticCorpus(std::size_t n, std::uint64_t seed) {
  static const std::vector<std::string> subjects{
      "The teacher", "My neighbour", "A young student", "The old farmer", "Our manager",
      "The small child", "Every visitor", "The careful driver", "His brother", "The doctor"};
  static const std::vector<std::string> verbs{
      "bought", "carried", "painted", "described", "noticed", "repaired", "finished",
      "borrowed", "ordered", "delivered", "discovered", "remembered"};
  static const std::vector<std::string> objects{
      "a wooden table", "the broken window", "several heavy boxes", "a beautiful picture",
      "the morning newspaper", "an interesting story", "the garden fence",
      "a delicious dinner", "the yellow bicycle", "their weekly report"};
  static const std::vector<std::string> tails{
      "before lunch", "after the long meeting", "during the summer holiday",
      "in the quiet village", "near the river bank", "without any help",
      "because it was necessary", "on a cold winter morning", "at the local market",
      "with great patience"};
  RandomStream rng(seed);
  auto pick = [&](const std::vector<std::string>& v) { return v[rng.UniformIndex(v.size())]; };
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = pick(subjects) + " " + pick(verbs) + " " + pick(objects) + " " + pick(tails);
    if (rng.Bernoulli(0.5)) s += " and then " + pick(verbs) + " " + pick(objects);
    out.push_back(s + ".");
  }
  return out;
}

std::string DumpOutcomes(const std::vector<perturb::ChainOutcome>& outcomes) {
  std::string out;
  for (const auto& o : outcomes) {
    out += perturb::ToJson(o.pair).dump() + (o.retained ? " kept\n" : " dropped\n");
  }
  return out;
}

Verdict PerturbationProtocol() {
  Checker c;
  const std::vector<std::string> corpus = SyntheticCorpus(1000, 31);
  const perturb::Lexicons& lex = perturb::Lexicons::Bundled();
  std::size_t retained = 0;
  std::size_t total = 0;
  const std::vector<std::vector<perturb::Kind>> combos = {
      {perturb::Kind::kKeyboard},
      {perturb::Kind::kSpelling, perturb::Kind::kCharSubstitute},
      {perturb::Kind::kOcr, perturb::Kind::kDeleteWord, perturb::Kind::kAntonym},
  };
  for (const auto& kinds : combos) {
    perturb::PerturbationConfig cfg;
    cfg.kinds = kinds;
    cfg.seed = 99;
    const auto first = perturb::PerturbCorpus(corpus, cfg, lex, 4);
    const auto second = perturb::PerturbCorpus(corpus, cfg, lex, 1);
    c.Expect(DumpOutcomes(first) == DumpOutcomes(second),
             "rerun differs for " + perturb::ComboLabel(kinds));
    for (const auto& o : first) {
      ++total;
      if (!o.retained) continue;
      ++retained;
      const double j = text::JaccardUnigram(text::Tokenize(o.pair.clean),
                                            text::Tokenize(o.pair.corrupt));
      c.Expect(j >= 0.7, "retained pair " + o.pair.id + " has Jaccard " + FormatFixed(j, 3));
    }
  }

  // Per-token rate: Bernoulli selections over eligible tokens, one augmenter.
  perturb::PerturbationConfig rate_cfg;
  rate_cfg.kinds = {perturb::Kind::kKeyboard};
  rate_cfg.seed = 5;
  rate_cfg.jaccard_min = 0.0;
  std::size_t eligible = 0;
  std::size_t selected = 0;
  for (const auto& o : perturb::PerturbCorpus(corpus, rate_cfg, lex, 4)) {
    for (const auto& step : o.steps) {
      eligible += step.eligible;
      selected += step.selected;
    }
  }
  const double rate = eligible == 0 ? 0.0 : static_cast<double>(selected) / eligible;
  c.Expect(eligible >= 10000, "only " + std::to_string(eligible) + " eligible tokens");
  c.Expect(rate >= 0.27 && rate <= 0.33, "rate " + FormatFixed(rate, 4));
  return c.Done(std::to_string(retained) + "/" + std::to_string(total) +
                " retained pairs all >= 0.7; reruns identical; rate " + FormatFixed(rate, 4) +
                " over " + std::to_string(eligible) + " eligible tokens");
}

Verdict LscTrend() {
  const auto start = std::chrono::steady_clock::now();
  Checker c;
  using K = perturb::Kind;
  harness::LscRunConfig cfg;
  cfg.corpus_name = "sents200";
  cfg.sentences = corpus::LoadLines(Fixture("sents200.txt"));
  const std::vector<K> base{K::kOcr, K::kSpelling, K::kKeyboard, K::kDeleteWord,
                            K::kCharSubstitute, K::kAntonym};
  cfg.combos = perturb::EnumerateCombos(base, 1);
  for (auto& combo : perturb::EnumerateCombos(base, 5)) cfg.combos.push_back(combo);
  cfg.seed = 7;
  cfg.jobs = 4;
  const harness::LscRun run = harness::RunLsc(cfg);
  std::optional<double> one;
  std::optional<double> five;
  std::size_t five_samples = 0;
  for (const auto& s : run.summary.sizes) {
    if (s.size == 1 && s.sample_count > 0) one = s.mean;
    if (s.size == 5 && s.sample_count > 0) {
      five = s.mean;
      five_samples = s.sample_count;
    }
  }
  c.Expect(one.has_value(), "no retained single-kind pairs");
  c.Expect(five.has_value(), "no retained five-kind pairs");
  const double gap = one && five ? *one - *five : 0.0;
  c.Expect(gap >= 0.02, "gap " + FormatFixed(gap, 4));
  const double secs = Seconds(start);
  c.Expect(secs < 120.0, "runtime " + FormatFixed(secs, 1) + "s");
  return c.Done("1P mean " + FormatFixed(one.value_or(0), 4) + ", 5P mean " +
                FormatFixed(five.value_or(0), 4) + " (" + std::to_string(five_samples) +
                " pairs), gap " + FormatFixed(gap, 4) + ", " + FormatFixed(secs, 1) + "s");
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult RunCli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = cli::Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Verdict LecIdentityBaseline() {
  Checker c;
  const std::vector<std::string> ref_paths{Fixture("mini.ref0"), Fixture("mini.ref1"),
                                           Fixture("mini.ref2"), Fixture("mini.ref3")};
  const corpus::ParallelCorpus pc = corpus::LoadParallel(Fixture("mini.src"), ref_paths);
  std::vector<std::string> sources;
  for (const auto& e : pc.entries) sources.push_back(e.source);

  harness::IdentityChatProvider identity;
  const auto results = harness::RunLec(harness::ItemsFromSources(sources), identity);
  std::vector<std::string> hyps;
  for (const auto& r : results) hyps.push_back(r.hypothesis);
  metrics::GleuConfig cfg;
  const double via_lec = metrics::CorpusGleu(pc, hyps, cfg).corpus_score;
  const double baseline = metrics::CorpusGleu(pc, sources, cfg).corpus_score;
  c.Expect(via_lec == baseline, "identity " + FormatFixed(via_lec, 12) + " vs baseline " +
                                    FormatFixed(baseline, 12));

  testing::ScratchDir dir;
  const CliResult lec = RunCli({"lec", "--src", Fixture("mini.src"), "--provider", "identity",
                                "--out", dir.File("lec")});
  c.Expect(lec.code == cli::kExitOk, "lec exit " + std::to_string(lec.code) + ": " + lec.err);
  const std::string refs = JoinStrings(ref_paths, ",");
  const CliResult score = RunCli({"score", "gleu", "--src", Fixture("mini.src"), "--refs", refs,
                                  "--hyp", dir.File("lec/hypotheses.txt"), "--json"});
  c.Expect(score.code == cli::kExitOk, "score exit " + std::to_string(score.code) + ": " +
                                           score.err);
  double cli_score = -1.0;
  if (score.code == cli::kExitOk) {
    cli_score = nlohmann::json::parse(score.out).at("corpusScore").get<double>();
  }
  c.Expect(cli_score == baseline, "CLI score " + FormatFixed(cli_score, 12));
  return c.Done("identity GLEU " + FormatFixed(baseline * 100, 2) +
                " equals the source baseline; lec + score ran via the CLI");
}

Verdict CorpusLoaders() {
  Checker c;
  const std::string m2 = ReadFile(Fixture("gold10.m2"));
  c.Expect(corpus::SerializeM2(corpus::ParseM2(m2)) == m2, "M2 round trip");

  testing::ScratchDir dir;
  const std::vector<std::string> refs{Fixture("mini.ref0"), Fixture("mini.ref1"),
                                      Fixture("mini.ref2"), Fixture("mini.ref3")};
  const corpus::ParallelCorpus pc = corpus::LoadParallel(Fixture("mini.src"), refs);
  std::vector<std::string> out_refs;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    out_refs.push_back(dir.File("ref" + std::to_string(i)));
  }
  corpus::WriteParallel(pc, dir.File("src"), out_refs);
  c.Expect(ReadFile(dir.File("src")) == ReadFile(Fixture("mini.src")), "source round trip");
  for (std::size_t i = 0; i < refs.size(); ++i) {
    c.Expect(ReadFile(out_refs[i]) == ReadFile(refs[i]), "reference " + std::to_string(i));
  }

  std::string jfleg_note = "JFLEG skipped (" + std::string(cli::kJflegDirEnv) + " unset)";
  if (const char* env = std::getenv(cli::kJflegDirEnv); env != nullptr && *env != '\0') {
    const CliResult r = RunCli({"corpus", "stats", "--jfleg-dir", env, "--json"});
    c.Expect(r.code == cli::kExitOk, "corpus stats exit " + std::to_string(r.code) + ": " + r.err);
    std::size_t pairs = 0;
    if (r.code == cli::kExitOk) pairs = nlohmann::json::parse(r.out)[0].at("pairs");
    c.Expect(pairs == 747, "JFLEG pairs " + std::to_string(pairs));
    jfleg_note = "JFLEG reports " + std::to_string(pairs) + " pairs";
  }
  return c.Done("M2 and parallel fixtures round-trip byte-exact; " + jfleg_note);
}

// Resolved preferences per task for annotators a1, a2, a3.
constexpr char kScript[10][3] = {
    {'S', 'S', 'S'}, {'S', 'S', 'H'}, {'H', 'H', 'H'}, {'S', 'H', '='}, {'=', '=', '='},
    {'S', 'S', 'S'}, {'H', 'S', 'S'}, {'S', 'S', '?'}, {'H', 'H', 'S'}, {'S', 'S', 'S'}};

std::string ChoiceFor(const annotation::AnnotationTask& task, char resolved) {
  switch (resolved) {
    case 'S':
      return task.system_is_a ? "A" : "B";
    case 'H':
      return task.system_is_a ? "B" : "A";
    case '=':
      return "same";
    default:
      return "undecided";
  }
}

Verdict AnnotationFlow() {
  Checker c;
  annotation::DatasetCorrections d;
  d.dataset = "mini";
  const auto src = corpus::LoadLines(Fixture("mini.src"));
  const auto sys = corpus::LoadLines(Fixture("mini.hyp"));
  const auto hum = corpus::LoadLines(Fixture("mini.ref0"));
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::string id = std::to_string(i + 1);
    d.items.push_back({id, src[i]});
    d.system[id] = sys[i];
    d.human[id] = hum[i];
  }
  annotation::StudyConfig cfg;
  cfg.tasks_per_dataset = 10;
  cfg.annotators_per_task = 3;
  cfg.seed = 12;
  testing::ScratchDir dir;
  annotation::Study study(annotation::CreateStudy({d}, cfg), cfg, dir.File("study"));
  annotation::AnnotationServer server(study);
  const int port = server.Start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);

  const std::vector<std::string> annotators{"a1", "a2", "a3"};
  std::vector<std::string> annotator_bodies;
  for (std::size_t a = 0; a < annotators.size(); ++a) {
    for (;;) {
      auto next = client.Get("/api/tasks/next?annotator=" + annotators[a]);
      if (!next || next->status != 200) {
        c.Expect(false, "next task request failed");
        break;
      }
      annotator_bodies.push_back(next->body);
      const auto j = nlohmann::json::parse(next->body);
      if (j.at("done").get<bool>()) break;
      const int id = j.at("task").at("taskId").get<int>();
      const auto& task = study.tasks().at(static_cast<std::size_t>(id - 1));
      const nlohmann::json body{{"annotator", annotators[a]},
                                {"choice", ChoiceFor(task, kScript[id - 1][a])}};
      auto posted = client.Post("/api/tasks/" + std::to_string(id) + "/label", body.dump(),
                                "application/json");
      c.Expect(posted && posted->status == 200, "label " + std::to_string(id));
      if (posted) annotator_bodies.push_back(posted->body);
    }
  }
  for (const auto& b : annotator_bodies) {
    c.Expect(b.find("system") == std::string::npos && b.find("human") == std::string::npos &&
                 b.find("systemIsA") == std::string::npos,
             "annotator-facing response leaks blinding");
  }
  c.Expect(study.label_count() == 30, "labels " + std::to_string(study.label_count()));

  auto stats = client.Get("/api/stats");
  c.Expect(stats && stats->status == 200, "stats request");
  if (stats && stats->status == 200) {
    const auto overall = nlohmann::json::parse(stats->body).at("overall");
    auto near = [](const nlohmann::json& v, double want) {
      return v.is_number() && std::abs(v.get<double>() - want) <= 1e-12;
    };
    // Per annotator S/(S+H): 6/9, 6/9, 5/7.
    c.Expect(near(overall.at("meanSystemPreference"), 43.0 / 63.0), "mean system preference");
    c.Expect(near(overall.at("iaa"), 19.0 / 30.0), "pairwise agreement");
    c.Expect(near(overall.at("kappa"), 20.0 / 53.0), "Fleiss kappa");
  }

  auto exported = client.Get("/api/export");
  c.Expect(exported && exported->status == 200, "export request");
  if (exported && exported->status == 200) {
    const annotation::StudyExport e = annotation::ParseExport(exported->body);
    c.Expect(annotation::SerializeExport(e) == exported->body, "export round trip");
    const auto records = annotation::ToPreferenceRecords(e);
    c.Expect(records.size() == 30, "exported records");
    const auto s = metrics::AgreementStats(records);
    c.Expect(s.overall.kappa && std::abs(*s.overall.kappa - 20.0 / 53.0) <= 1e-12,
             "kappa from imported export");
  }
  server.Stop();
  return c.Done("10 tasks x 3 annotators over HTTP; preference 43/63, IAA 19/30, kappa 20/53; "
                "blinding hidden; export round-trips");
}

}  // namespace
}  // namespace perturbench::acceptance

int main() {
  using namespace perturbench::acceptance;
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"gleu-oracle", GleuOracle},
      {"edit-round-trip", EditRoundTrip},
      {"f05-fixture", FBetaFixture},
      {"fleiss-kappa", FleissOracle},
      {"perturbation-protocol", PerturbationProtocol},
      {"lsc-trend", LscTrend},
      {"lec-identity-baseline", LecIdentityBaseline},
      {"corpus-loaders", CorpusLoaders},
      {"annotation-flow", AnnotationFlow},
  };
  perturbench::SetWarningSink([](std::string_view) {});
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::kPass ? "PASS" : "FAIL";
    if (v.outcome == Outcome::kFail) ++failed;
    std::cout << tag << "  " << c.name << "  " << v.detail << "\n" << std::flush;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
