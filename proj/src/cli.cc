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

#include "perturbench/cli.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "CLI11.hpp"
#include "perturbench/annotation.h"
#include "perturbench/common.h"
#include "perturbench/corpus.h"
#include "perturbench/errors.h"
#include "perturbench/harness.h"
#include "perturbench/http.h"
#include "perturbench/metrics.h"
#include "perturbench/perturb.h"

namespace perturbench::cli {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ------------------------------------------------------------ profiles

embed::ProviderSpec EndpointProfile::ToProviderSpec() const {
  embed::ProviderSpec spec;
  spec.provider_id = provider_id.empty() ? name : provider_id;
  spec.model_id = model_id;
  if (!endpoint_url.empty()) spec.endpoint_url = endpoint_url;
  spec.dim = dim;
  spec.context_window = context_window;
  spec.max_batch = max_batch;
  return spec;
}

namespace {

std::size_t ParseCount(std::string_view value, std::size_t line) {
  const std::string s(Trim(value));
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || s.front() == '-') {
    throw ParseError("expected a non-negative integer, got '" + s + "'", line);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::map<std::string, EndpointProfile> ParseProfiles(std::string_view contents) {
  std::map<std::string, EndpointProfile> profiles;
  EndpointProfile* current = nullptr;
  std::size_t line_no = 0;
  for (const std::string& raw : SplitString(contents, '\n')) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError("malformed section header", line_no);
      }
      const std::string name(Trim(line.substr(1, line.size() - 2)));
      if (profiles.count(name) != 0) {
        throw ParseError("duplicate profile '" + name + "'", line_no);
      }
      current = &profiles[name];
      current->name = name;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
    if (current == nullptr) throw ParseError("key outside of a [profile] section", line_no);
    const std::string key(Trim(line.substr(0, eq)));
    const std::string value(Trim(line.substr(eq + 1)));
    if (key == "providerId") {
      current->provider_id = value;
    } else if (key == "endpointUrl") {
      current->endpoint_url = value;
    } else if (key == "modelId") {
      current->model_id = value;
    } else if (key == "dim") {
      current->dim = ParseCount(value, line_no);
    } else if (key == "contextWindow") {
      current->context_window = ParseCount(value, line_no);
    } else if (key == "maxBatch") {
      current->max_batch = ParseCount(value, line_no);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }
  for (const auto& [name, p] : profiles) {
    if (p.endpoint_url.empty()) {
      throw ParseError("profile '" + name + "' has no endpointUrl", 0);
    }
  }
  return profiles;
}

// ------------------------------------------------------------ manifest

nlohmann::json RunManifest::ToJson() const {
  ojson j;
  j["commandLine"] = command_line;
  j["command"] = command;
  j["config"] = config;
  j["seed"] = seed ? ojson(*seed) : ojson(nullptr);
  j["toolkitVersion"] = std::string(kVersion);
  j["startedAt"] = started_at;
  j["finishedAt"] = finished_at ? ojson(*finished_at) : ojson(nullptr);
  return nlohmann::json::parse(j.dump());
}

RunManifest RunManifest::FromJson(const nlohmann::json& j) {
  RunManifest m;
  m.command_line = j.at("commandLine").get<std::vector<std::string>>();
  m.command = j.value("command", "");
  m.config = j.value("config", nlohmann::json::object());
  if (j.contains("seed") && !j.at("seed").is_null()) {
    m.seed = j.at("seed").get<std::uint64_t>();
  }
  m.started_at = j.value("startedAt", "");
  if (j.contains("finishedAt") && !j.at("finishedAt").is_null()) {
    m.finished_at = j.at("finishedAt").get<std::string>();
  }
  return m;
}

namespace {

struct Context {
  std::vector<std::string> args;
  std::ostream& out;
  std::ostream& err;
  std::size_t jobs = 4;
  std::string profiles_path;
};

// Writes the manifest before any output and stamps it again on completion.
class ManifestWriter {
 public:
  ManifestWriter(std::string path, const Context& ctx, std::string command,
                 nlohmann::json config, std::optional<std::uint64_t> seed)
      : path_(std::move(path)) {
    manifest_.command_line = ctx.args;
    manifest_.command = std::move(command);
    manifest_.config = std::move(config);
    manifest_.seed = seed;
    manifest_.started_at = UtcTimestamp();
    const fs::path parent = fs::path(path_).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    Write();
  }

  void Finish() {
    manifest_.finished_at = UtcTimestamp();
    Write();
  }

 private:
  void Write() const { WriteFile(path_, manifest_.ToJson().dump(2) + "\n"); }

  std::string path_;
  RunManifest manifest_;
};

std::string DirManifest(const std::string& dir) {
  return (fs::path(dir) / "manifest.json").string();
}

// pairs.jsonl -> pairs.manifest.json
std::string SidecarManifest(const std::string& file) {
  fs::path p(file);
  return (p.parent_path() / (p.stem().string() + ".manifest.json")).string();
}

std::string Stem(const std::string& path) {
  return fs::path(path).stem().string();
}

std::vector<std::string> SplitList(const std::string& text, char delim = ',') {
  std::vector<std::string> items;
  for (const std::string& part : SplitString(text, delim)) {
    const std::string_view t = Trim(part);
    if (!t.empty()) items.emplace_back(t);
  }
  return items;
}

std::vector<std::string> NonEmptyLines(const std::string& path) {
  std::vector<std::string> lines;
  for (std::string& l : ReadLines(path)) {
    if (!Trim(l).empty()) lines.push_back(std::move(l));
  }
  return lines;
}

std::string JsonLines(const std::vector<nlohmann::json>& records) {
  std::string s;
  for (const auto& r : records) s += r.dump() + "\n";
  return s;
}

std::map<std::string, EndpointProfile> LoadProfiles(const Context& ctx) {
  std::string path = ctx.profiles_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kProfilesEnv)) path = env;
  }
  if (path.empty()) {
    if (fs::exists("perturbench.ini")) path = "perturbench.ini";
  }
  if (path.empty()) return {};
  return ParseProfiles(ReadFile(path));
}

const EndpointProfile& FindProfile(const std::map<std::string, EndpointProfile>& profiles,
                                   const std::string& name) {
  const auto it = profiles.find(name);
  if (it == profiles.end()) {
    throw ConfigError("unknown provider '" + name +
                      "': not a built-in provider and no such profile (set --profiles or " +
                      kProfilesEnv + ")");
  }
  return it->second;
}

// ------------------------------------------------------------ perturb

struct PerturbOptions {
  std::string in;
  std::string kinds;
  double prob = 0.30;
  std::size_t max_words = 10;
  double jaccard_min = 0.70;
  std::uint64_t seed = 0;
  std::string out;
  std::string discards;
};

int CmdPerturb(const PerturbOptions& o, Context& ctx) {
  perturb::PerturbationConfig cfg;
  cfg.kinds = perturb::ParseCombo(o.kinds);
  cfg.prob_per_token = o.prob;
  cfg.max_affected_words = o.max_words;
  cfg.jaccard_min = o.jaccard_min;
  cfg.seed = o.seed;
  cfg.Validate();
  const std::vector<std::string> texts = NonEmptyLines(o.in);

  std::optional<ManifestWriter> manifest;
  if (!o.out.empty()) {
    nlohmann::json config = {{"in", o.in},
                             {"kinds", perturb::ComboLabel(cfg.kinds)},
                             {"prob", o.prob},
                             {"maxWords", o.max_words},
                             {"jaccardMin", o.jaccard_min},
                             {"discards", o.discards}};
    manifest.emplace(SidecarManifest(o.out), ctx, "perturb", config, o.seed);
  }

  const auto outcomes =
      perturb::PerturbCorpus(texts, cfg, perturb::Lexicons::Bundled(), ctx.jobs);
  std::vector<nlohmann::json> kept;
  std::vector<nlohmann::json> dropped;
  std::size_t eligible = 0;
  std::size_t selected = 0;
  for (const auto& oc : outcomes) {
    for (const auto& step : oc.steps) {
      eligible += step.eligible;
      selected += step.selected;
    }
    if (oc.retained) {
      kept.push_back(perturb::ToJson(oc.pair));
    } else {
      ojson d;
      d["id"] = oc.pair.id;
      d["clean"] = oc.pair.clean;
      d["corrupt"] = oc.pair.corrupt;
      d["jaccard"] = oc.pair.jaccard;
      d["reason"] = oc.discard_reason;
      dropped.push_back(nlohmann::json::parse(d.dump()));
    }
  }
  if (o.out.empty()) {
    ctx.out << JsonLines(kept);
  } else {
    WriteFile(o.out, JsonLines(kept));
  }
  if (!o.discards.empty()) WriteFile(o.discards, JsonLines(dropped));
  ctx.err << "retained " << kept.size() << " of " << outcomes.size()
          << " pairs; augmentation rate "
          << FormatFixed(eligible == 0 ? 0.0 : static_cast<double>(selected) / eligible, 4)
          << " over " << eligible << " eligible tokens\n";
  if (manifest) manifest->Finish();
  return kExitOk;
}

// ------------------------------------------------------------ lsc

struct LscOptions {
  std::vector<std::string> corpora;
  std::vector<std::string> names;
  std::string providers = "local";
  std::string combos;
  std::size_t group_size = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool identity = false;
  std::size_t dim = 1024;
  std::size_t sample = 0;
  std::string text_column;
  double prob = 0.30;
  std::size_t max_words = 10;
  double jaccard_min = 0.70;
  std::size_t max_in_flight = 4;
  bool per_combo = false;
};

std::vector<std::string> LoadUnits(const std::string& path, const LscOptions& o) {
  if (fs::path(path).extension() == ".csv") {
    corpus::ReviewOptions ro;
    ro.text_column = o.text_column;
    if (o.sample == 0) return corpus::LoadDocuments(path, ro);
    return corpus::LoadReviews(path, o.sample, o.seed, ro).documents;
  }
  return NonEmptyLines(path);
}

int CmdLsc(const LscOptions& o, Context& ctx) {
  if (!o.names.empty() && o.names.size() != o.corpora.size()) {
    throw std::invalid_argument("--name must be given once per --corpus");
  }
  const auto combos = perturb::ParseCombos(o.combos);
  const std::vector<std::string> providers = SplitList(o.providers);
  if (providers.empty()) throw std::invalid_argument("--provider is empty");
  std::map<std::string, EndpointProfile> profiles;
  if (std::any_of(providers.begin(), providers.end(),
                  [](const std::string& p) { return p != embed::kLocalProviderId; })) {
    profiles = LoadProfiles(ctx);
  }

  std::optional<ManifestWriter> manifest;
  if (!o.out.empty()) {
    nlohmann::json config = {{"corpora", o.corpora},
                             {"names", o.names},
                             {"providers", providers},
                             {"combos", o.combos},
                             {"groupSize", o.group_size},
                             {"identity", o.identity},
                             {"dim", o.dim},
                             {"sample", o.sample},
                             {"prob", o.prob},
                             {"maxWords", o.max_words},
                             {"jaccardMin", o.jaccard_min}};
    manifest.emplace(DirManifest(o.out), ctx, "lsc", config, o.seed);
  }

  const bool nested = o.corpora.size() > 1 || providers.size() > 1;
  std::vector<harness::LscSummary> summaries;
  for (std::size_t c = 0; c < o.corpora.size(); ++c) {
    const std::string name = o.names.empty() ? Stem(o.corpora[c]) : o.names[c];
    const std::vector<std::string> units = LoadUnits(o.corpora[c], o);
    for (const std::string& provider : providers) {
      harness::LscRunConfig cfg;
      cfg.corpus_name = name;
      cfg.sentences = units;
      cfg.combos = combos;
      cfg.provider = provider == embed::kLocalProviderId
                         ? embed::ProviderSpec::Local(o.dim)
                         : FindProfile(profiles, provider).ToProviderSpec();
      cfg.group_size = o.group_size;
      cfg.seed = o.seed;
      cfg.prob_per_token = o.prob;
      cfg.max_affected_words = o.max_words;
      cfg.jaccard_min = o.jaccard_min;
      cfg.identity = o.identity;
      cfg.jobs = ctx.jobs;
      cfg.max_in_flight = o.max_in_flight;
      if (!o.out.empty()) {
        cfg.run_dir = nested ? (fs::path(o.out) / (name + "." + provider)).string() : o.out;
      }
      harness::LscRun run = harness::RunLsc(cfg);
      run.summary.provider = provider;
      summaries.push_back(std::move(run.summary));
    }
  }

  const std::string table = harness::RenderLscTable(summaries);
  ctx.out << table;
  if (o.per_combo) {
    for (const auto& s : summaries) ctx.out << "\n" << harness::RenderComboTable(s);
  }
  if (!o.out.empty()) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& s : summaries) all.push_back(harness::ToJson(s));
    WriteFile((fs::path(o.out) / "table.txt").string(), table);
    WriteFile((fs::path(o.out) / "summaries.json").string(), all.dump(2) + "\n");
    manifest->Finish();
  }
  return kExitOk;
}

// ------------------------------------------------------------ lec

struct LecOptions {
  std::string src;
  std::string m2;
  std::string provider = "identity";
  std::string out;
  std::string prompt;
  double temperature = 0.0;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;
  int max_tokens = 1000;
};

int CmdLec(const LecOptions& o, Context& ctx) {
  std::vector<std::string> sources;
  if (!o.m2.empty()) {
    for (const auto& s : corpus::LoadM2(o.m2).sentences) sources.push_back(s.source_line);
  } else {
    sources = corpus::LoadLines(o.src);
  }
  harness::LecRunConfig cfg;
  cfg.params.temperature = o.temperature;
  cfg.params.frequency_penalty = o.frequency_penalty;
  cfg.params.presence_penalty = o.presence_penalty;
  cfg.params.max_tokens = o.max_tokens;
  cfg.params.Validate();
  if (!o.prompt.empty()) cfg.prompt = harness::PromptTemplate::FromText(ReadFile(o.prompt));
  cfg.run_dir = o.out;
  cfg.jobs = ctx.jobs;

  std::unique_ptr<harness::ChatProvider> provider;
  if (o.provider == "identity") {
    provider = std::make_unique<harness::IdentityChatProvider>();
  } else {
    const auto profiles = LoadProfiles(ctx);
    const EndpointProfile& p = FindProfile(profiles, o.provider);
    provider = std::make_unique<harness::HttpChatProvider>(
        p.provider_id.empty() ? p.name : p.provider_id, p.endpoint_url, p.model_id,
        http::ApiKeyFromEnv());
  }

  nlohmann::json config = {{"src", o.src},
                           {"m2", o.m2},
                           {"provider", o.provider},
                           {"prompt", o.prompt},
                           {"temperature", o.temperature},
                           {"frequencyPenalty", o.frequency_penalty},
                           {"presencePenalty", o.presence_penalty},
                           {"maxTokens", o.max_tokens}};
  ManifestWriter manifest(DirManifest(o.out), ctx, "lec", config, std::nullopt);
  const auto results =
      harness::RunLec(harness::ItemsFromSources(sources), *provider, cfg);
  std::size_t errors = 0;
  std::size_t flagged = 0;
  for (const auto& r : results) {
    if (r.error) ++errors;
    if (!r.flags.empty()) ++flagged;
  }
  ctx.out << "corrected " << results.size() << " sentences with " << provider->id()
          << " (" << errors << " errors, " << flagged << " flagged) -> "
          << (fs::path(o.out) / "hypotheses.txt").string() << "\n";
  manifest.Finish();
  return errors == 0 ? kExitOk : kExitInternalError;
}

// ------------------------------------------------------------ score

struct GleuOptions {
  std::string src;
  std::vector<std::string> refs;
  std::string hyp;
  std::uint64_t seed = 0;
  std::size_t iterations = 500;
  std::size_t max_n = 4;
  std::string out;
  bool json = false;
};

int CmdGleu(const GleuOptions& o, Context& ctx) {
  metrics::GleuConfig cfg;
  cfg.seed = o.seed;
  cfg.iterations = o.iterations;
  cfg.max_n = o.max_n;
  cfg.Validate();
  std::optional<ManifestWriter> manifest;
  if (!o.out.empty()) {
    nlohmann::json config = {{"src", o.src}, {"refs", o.refs}, {"hyp", o.hyp},
                             {"iterations", o.iterations}, {"maxN", o.max_n}};
    manifest.emplace(DirManifest(o.out), ctx, "score gleu", config, o.seed);
  }
  const corpus::ParallelCorpus pc = corpus::LoadParallel(o.src, o.refs);
  const std::vector<std::string> hyps = corpus::LoadLines(o.hyp);
  if (hyps.size() != pc.size()) {
    throw StructuralError(o.hyp + ": " + std::to_string(hyps.size()) +
                          " lines, expected " + std::to_string(pc.size()));
  }
  const metrics::CorpusGleuResult r = metrics::CorpusGleu(pc, hyps, cfg, ctx.jobs);
  const nlohmann::json report = metrics::GleuReport(r);
  if (o.json) {
    ctx.out << report.dump(2) << "\n";
  } else {
    ctx.out << metrics::RenderScoreTable({{Stem(o.hyp), r.corpus_score}}, "gleu");
  }
  if (manifest) {
    WriteFile((fs::path(o.out) / "gleu.json").string(), report.dump(2) + "\n");
    manifest->Finish();
  }
  return kExitOk;
}

struct ErrantOptions {
  std::string m2;
  std::string hyp;
  double beta = 0.5;
  std::string out;
  bool json = false;
};

int CmdErrant(const ErrantOptions& o, Context& ctx) {
  std::optional<ManifestWriter> manifest;
  if (!o.out.empty()) {
    nlohmann::json config = {{"m2", o.m2}, {"hyp", o.hyp}, {"beta", o.beta}};
    manifest.emplace(DirManifest(o.out), ctx, "score errant", config, std::nullopt);
  }
  const corpus::M2Document doc = corpus::LoadM2(o.m2);
  const std::vector<std::string> hyps = corpus::LoadLines(o.hyp);
  if (hyps.size() != doc.size()) {
    throw StructuralError(o.hyp + ": " + std::to_string(hyps.size()) +
                          " lines, expected " + std::to_string(doc.size()));
  }
  const metrics::ErrantResult r = metrics::ErrantScore(doc, hyps, o.beta);
  const nlohmann::json report = metrics::ErrantReport(r);
  if (o.json) {
    ctx.out << report.dump(2) << "\n";
  } else {
    const auto& s = r.score;
    ctx.out << metrics::RenderScoreTable({{Stem(o.hyp), s.fbeta}}, "errant")
            << "TP " << s.tp << "  FP " << s.fp << "  FN " << s.fn << "  P "
            << FormatFixed(s.precision, 4) << "  R " << FormatFixed(s.recall, 4)
            << "  F" << FormatFixed(s.beta, 1) << " " << FormatFixed(s.fbeta, 4) << "\n";
  }
  if (manifest) {
    WriteFile((fs::path(o.out) / "errant.json").string(), report.dump(2) + "\n");
    manifest->Finish();
  }
  return kExitOk;
}

// ------------------------------------------------------------ agreement

struct AgreementOptions {
  std::string labels;
  std::size_t raters = 0;
  std::string out;
  bool json = false;
};

int CmdAgreement(const AgreementOptions& o, Context& ctx) {
  std::optional<ManifestWriter> manifest;
  if (!o.out.empty()) {
    nlohmann::json config = {{"labels", o.labels}, {"raters", o.raters}};
    manifest.emplace(DirManifest(o.out), ctx, "agreement", config, std::nullopt);
  }
  const auto records = metrics::LoadPreferenceRecords(o.labels);
  const metrics::AgreementSummary s = metrics::AgreementStats(records, o.raters);
  const nlohmann::json j = metrics::ToJson(s);
  if (o.json) {
    ctx.out << j.dump(2) << "\n";
  } else {
    ctx.out << metrics::RenderPreferenceTable(s) << "\n" << metrics::RenderAgreementText(s);
  }
  if (manifest) {
    WriteFile((fs::path(o.out) / "agreement.json").string(), j.dump(2) + "\n");
    manifest->Finish();
  }
  return kExitOk;
}

// ------------------------------------------------------------ annotate

struct ServeOptions {
  std::string study;
  std::vector<std::string> datasets;
  std::size_t tasks_per_dataset = 100;
  std::size_t annotators_per_task = 3;
  std::uint64_t seed = 0;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string ui_dir;
};

// NAME=SRC,SYSTEM,HUMAN; item ids are 1-based line numbers.
annotation::DatasetCorrections LoadDatasetSpec(const std::string& spec) {
  const std::size_t eq = spec.find('=');
  const std::vector<std::string> files =
      eq == std::string::npos ? std::vector<std::string>{} : SplitList(spec.substr(eq + 1));
  if (eq == 0 || files.size() != 3) {
    throw std::invalid_argument("--dataset expects NAME=SRC,SYSTEM,HUMAN, got '" + spec + "'");
  }
  annotation::DatasetCorrections d;
  d.dataset = spec.substr(0, eq);
  const auto src = corpus::LoadLines(files[0]);
  const auto sys = corpus::LoadLines(files[1]);
  const auto hum = corpus::LoadLines(files[2]);
  for (const auto* other : {&sys, &hum}) {
    if (other->size() != src.size()) {
      throw StructuralError(d.dataset + ": correction files must have " +
                            std::to_string(src.size()) + " lines");
    }
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    const std::string id = std::to_string(i + 1);
    d.items.push_back({id, src[i]});
    if (!sys[i].empty()) d.system[id] = sys[i];
    if (!hum[i].empty()) d.human[id] = hum[i];
  }
  return d;
}

volatile std::sig_atomic_t g_stop_requested = 0;

void OnStopSignal(int) { g_stop_requested = 1; }

int CmdServe(const ServeOptions& o, Context& ctx) {
  std::unique_ptr<annotation::Study> study;
  if (o.datasets.empty()) {
    study = annotation::Study::Open(o.study);
  } else {
    annotation::StudyConfig cfg;
    cfg.tasks_per_dataset = o.tasks_per_dataset;
    cfg.annotators_per_task = o.annotators_per_task;
    cfg.seed = o.seed;
    std::vector<annotation::DatasetCorrections> data;
    for (const auto& spec : o.datasets) data.push_back(LoadDatasetSpec(spec));
    study = std::make_unique<annotation::Study>(annotation::CreateStudy(data, cfg), cfg,
                                                o.study);
  }
  annotation::AnnotationServer server(
      *study, o.ui_dir.empty() ? std::nullopt : std::optional<std::string>(o.ui_dir));
  const int port = server.Start(o.host, o.port);
  ctx.out << "serving " << study->task_count() << " tasks on http://" << o.host << ":"
          << port << "/ (Ctrl-C to stop)" << std::endl;
  g_stop_requested = 0;
  auto prev_int = std::signal(SIGINT, OnStopSignal);
  auto prev_term = std::signal(SIGTERM, OnStopSignal);
  while (g_stop_requested == 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  std::signal(SIGINT, prev_int);
  std::signal(SIGTERM, prev_term);
  server.Stop();
  ctx.out << study->label_count() << " labels stored in " << o.study << "\n";
  return kExitOk;
}

struct ExportOptions {
  std::string study;
  std::string out;
};

int CmdExport(const ExportOptions& o, Context& ctx) {
  const auto study = annotation::Study::Open(o.study);
  if (o.out.empty()) {
    ctx.out << annotation::SerializeExport(study->Export());
  } else {
    study->ExportTo(o.out);
    ctx.err << "exported " << study->label_count() << " labels to " << o.out << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------ corpus stats

struct StatsOptions {
  std::string src;
  std::vector<std::string> refs;
  std::vector<std::string> m2;
  std::vector<std::string> text;
  std::string jfleg_dir;
  bool json = false;
};

// Looks for test.src/test.ref0..3 directly in `dir` or in dir/test.
corpus::ParallelCorpus LoadJfleg(const std::string& dir) {
  for (const fs::path& base : {fs::path(dir), fs::path(dir) / "test"}) {
    if (!fs::exists(base / "test.src")) continue;
    std::vector<std::string> refs;
    for (int i = 0; fs::exists(base / ("test.ref" + std::to_string(i))); ++i) {
      refs.push_back((base / ("test.ref" + std::to_string(i))).string());
    }
    if (refs.empty()) throw ConfigError("no test.ref* files next to " + (base / "test.src").string());
    return corpus::LoadParallel((base / "test.src").string(), refs);
  }
  throw ConfigError("no test.src found in " + dir + " or " + dir + "/test");
}

int CmdStats(const StatsOptions& o, Context& ctx) {
  std::vector<corpus::CorpusStats> rows;
  std::string jfleg = o.jfleg_dir;
  if (jfleg.empty()) {
    if (const char* env = std::getenv(kJflegDirEnv)) jfleg = env;
  }
  if (!jfleg.empty()) rows.push_back(corpus::Stats(LoadJfleg(jfleg), "JFLEG"));
  if (!o.src.empty()) {
    if (o.refs.empty()) throw std::invalid_argument("--src needs --refs");
    rows.push_back(corpus::Stats(corpus::LoadParallel(o.src, o.refs), Stem(o.src)));
  }
  for (const auto& path : o.m2) rows.push_back(corpus::Stats(corpus::LoadM2(path), Stem(path)));
  for (const auto& path : o.text) rows.push_back(corpus::Stats(NonEmptyLines(path), Stem(path)));
  if (rows.empty()) {
    throw std::invalid_argument("nothing to describe: pass --src/--refs, --m2, --text or --jfleg-dir");
  }
  if (o.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json dist = nlohmann::json::object();
      for (const auto& [k, v] : r.ref_distribution) dist[std::to_string(k)] = v;
      arr.push_back({{"name", r.name}, {"pairs", r.pair_count}, {"references", dist}});
    }
    ctx.out << arr.dump(2) << "\n";
  } else {
    ctx.out << corpus::RenderStatsTable(rows);
  }
  return kExitOk;
}

// ------------------------------------------------------------ dispatch

std::vector<std::string> WithOutOverride(std::vector<std::string> args,
                                         const std::string& out) {
  bool replaced = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out" && i + 1 < args.size()) {
      args[i + 1] = out;
      replaced = true;
    } else if (args[i].rfind("--out=", 0) == 0) {
      args[i] = "--out=" + out;
      replaced = true;
    }
  }
  if (!replaced) throw std::invalid_argument("the recorded command has no --out to override");
  return args;
}

int Dispatch(Context& ctx, bool allow_replay);

int CmdReplay(const std::string& manifest_path, const std::string& out, Context& ctx) {
  const RunManifest m =
      RunManifest::FromJson(nlohmann::json::parse(ReadFile(manifest_path)));
  if (!m.command_line.empty() && m.command_line.front() == "replay") {
    throw std::invalid_argument("a replay manifest cannot be replayed");
  }
  Context inner{m.command_line, ctx.out, ctx.err, ctx.jobs, ctx.profiles_path};
  if (!out.empty()) inner.args = WithOutOverride(inner.args, out);
  return Dispatch(inner, false);
}

int Dispatch(Context& ctx, bool allow_replay) {
  CLI::App app{"Robustness and correction benchmarks for language model pipelines",
               "perturbench"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.set_version_flag("--version", std::string(kVersion));
  std::size_t jobs = ctx.jobs;
  std::string profiles;
  app.add_option("--jobs", jobs, "Maximum worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--profiles", profiles, "Endpoint profiles file");

  PerturbOptions po;
  auto* perturb_cmd = app.add_subcommand("perturb", "Perturb a corpus into clean/corrupt pairs");
  perturb_cmd->add_option("--in", po.in, "Input text, one sentence per line")->required();
  perturb_cmd->add_option("--kinds", po.kinds, "Kinds applied in order, e.g. ocr,keyboard")
      ->required();
  perturb_cmd->add_option("--prob", po.prob, "Per-token augmentation probability")->capture_default_str();
  perturb_cmd->add_option("--max-words", po.max_words, "Word budget per kind")->capture_default_str();
  perturb_cmd->add_option("--jaccard-min", po.jaccard_min, "Retention threshold")->capture_default_str();
  perturb_cmd->add_option("--seed", po.seed, "Seed")->capture_default_str();
  perturb_cmd->add_option("--out", po.out, "Retained pairs (JSONL); stdout when omitted");
  perturb_cmd->add_option("--discards", po.discards, "Discarded pairs (JSONL)");

  LscOptions lo;
  auto* lsc_cmd = app.add_subcommand("lsc", "Embedding similarity under perturbation");
  lsc_cmd->add_option("--corpus", lo.corpora, "Sentences (.txt) or reviews (.csv)")
      ->required();
  lsc_cmd->add_option("--name", lo.names, "Row label per corpus (default: file stem)");
  lsc_cmd->add_option("--provider", lo.providers, "local or profile names, comma-separated")->capture_default_str();
  lsc_cmd->add_option("--combos", lo.combos, "Combos, e.g. 'o,k;o,k,s,c,d'")->required();
  lsc_cmd->add_option("--group-size", lo.group_size, "Sentences per unit (1-10)")->capture_default_str();
  lsc_cmd->add_option("--seed", lo.seed, "Seed")->capture_default_str();
  lsc_cmd->add_option("--out", lo.out, "Run directory (checkpoint, records, summary)");
  lsc_cmd->add_flag("--identity", lo.identity, "Embed the clean text on both sides");
  lsc_cmd->add_option("--dim", lo.dim, "Local embedder dimension")->capture_default_str();
  lsc_cmd->add_option("--sample", lo.sample, "Reviews sampled from a .csv corpus (0: all)")->capture_default_str();
  lsc_cmd->add_option("--text-column", lo.text_column, "CSV column holding the text");
  lsc_cmd->add_option("--prob", lo.prob, "Per-token augmentation probability")->capture_default_str();
  lsc_cmd->add_option("--max-words", lo.max_words, "Word budget per kind")->capture_default_str();
  lsc_cmd->add_option("--jaccard-min", lo.jaccard_min, "Retention threshold")->capture_default_str();
  lsc_cmd->add_option("--max-in-flight", lo.max_in_flight, "Concurrent embedding calls")->capture_default_str();
  lsc_cmd->add_flag("--per-combo", lo.per_combo, "Also print one row per combo");

  LecOptions eo;
  auto* lec_cmd = app.add_subcommand("lec", "Correct sentences with a chat provider");
  auto* lec_src = lec_cmd->add_option("--src", eo.src, "Source sentences, one per line");
  auto* lec_m2 = lec_cmd->add_option("--m2", eo.m2, "M2 file whose sources are corrected");
  lec_src->excludes(lec_m2);
  lec_cmd->add_option("--provider", eo.provider, "identity or a profile name")->capture_default_str();
  lec_cmd->add_option("--out", eo.out, "Run directory")->required();
  lec_cmd->add_option("--prompt", eo.prompt, "Prompt template file");
  lec_cmd->add_option("--temperature", eo.temperature, "")->capture_default_str();
  lec_cmd->add_option("--frequency-penalty", eo.frequency_penalty, "")->capture_default_str();
  lec_cmd->add_option("--presence-penalty", eo.presence_penalty, "")->capture_default_str();
  lec_cmd->add_option("--max-tokens", eo.max_tokens, "")->capture_default_str();

  auto* score_cmd = app.add_subcommand("score", "Score hypotheses");
  score_cmd->require_subcommand(1);
  GleuOptions go;
  auto* gleu_cmd = score_cmd->add_subcommand("gleu", "Corpus GLEU against references");
  gleu_cmd->add_option("--src", go.src, "Source sentences")->required();
  gleu_cmd->add_option("--refs", go.refs, "Reference files, comma-separated")
      ->required()
      ->delimiter(',');
  gleu_cmd->add_option("--hyp", go.hyp, "Hypotheses")->required();
  gleu_cmd->add_option("--seed", go.seed, "Reference sampling seed")->capture_default_str();
  gleu_cmd->add_option("--iterations", go.iterations, "Reference draws")->capture_default_str();
  gleu_cmd->add_option("--max-n", go.max_n, "Highest n-gram order")->capture_default_str();
  gleu_cmd->add_option("--out", go.out, "Directory for gleu.json");
  gleu_cmd->add_flag("--json", go.json, "Print the JSON report instead of the table");
  ErrantOptions ro;
  auto* errant_cmd = score_cmd->add_subcommand("errant", "Span-based F-score against M2");
  errant_cmd->add_option("--m2", ro.m2, "Gold M2 file")->required();
  errant_cmd->add_option("--hyp", ro.hyp, "Hypotheses")->required();
  errant_cmd->add_option("--beta", ro.beta, "")->capture_default_str();
  errant_cmd->add_option("--out", ro.out, "Directory for errant.json");
  errant_cmd->add_flag("--json", ro.json, "Print the JSON report instead of the table");

  AgreementOptions ao;
  auto* agree_cmd = app.add_subcommand("agreement", "Preference, IAA and Fleiss kappa");
  agree_cmd->add_option("--labels", ao.labels, "Labels (JSONL, CSV or study export)")
      ->required();
  agree_cmd->add_option("--raters", ao.raters, "Raters per item (0: infer)")->capture_default_str();
  agree_cmd->add_option("--out", ao.out, "Directory for agreement.json");
  agree_cmd->add_flag("--json", ao.json, "Print JSON instead of tables");

  auto* annotate_cmd = app.add_subcommand("annotate", "Blind preference annotation");
  annotate_cmd->require_subcommand(1);
  ServeOptions so;
  auto* serve_cmd = annotate_cmd->add_subcommand("serve", "Serve a study over HTTP");
  serve_cmd->add_option("--study", so.study, "Study directory")->required();
  serve_cmd->add_option("--dataset", so.datasets,
                        "Create from NAME=SRC,SYSTEM,HUMAN (repeatable)");
  serve_cmd->add_option("--tasks-per-dataset", so.tasks_per_dataset, "")->capture_default_str();
  serve_cmd->add_option("--annotators-per-task", so.annotators_per_task, "")->capture_default_str();
  serve_cmd->add_option("--seed", so.seed, "Sampling and blinding seed")->capture_default_str();
  serve_cmd->add_option("--host", so.host, "")->capture_default_str();
  serve_cmd->add_option("--port", so.port, "0 picks a free port")->capture_default_str();
  serve_cmd->add_option("--ui-dir", so.ui_dir, "Built annotation UI");
  ExportOptions xo;
  auto* export_cmd = annotate_cmd->add_subcommand("export", "Export labels with provenance");
  export_cmd->add_option("--study", xo.study, "Study directory")->required();
  export_cmd->add_option("--out", xo.out, "Output file; stdout when omitted");

  auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
  corpus_cmd->require_subcommand(1);
  StatsOptions to;
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "Pair counts and references per sentence");
  stats_cmd->add_option("--src", to.src, "Parallel source file");
  stats_cmd->add_option("--refs", to.refs, "Reference files, comma-separated")->delimiter(',');
  stats_cmd->add_option("--m2", to.m2, "M2 file (repeatable)");
  stats_cmd->add_option("--text", to.text, "Plain text file (repeatable)");
  stats_cmd->add_option("--jfleg-dir", to.jfleg_dir,
                        std::string("JFLEG directory (default: $") + kJflegDirEnv + ")");
  stats_cmd->add_flag("--json", to.json, "Print JSON instead of the table");

  std::string replay_manifest;
  std::string replay_out;
  CLI::App* replay_cmd = nullptr;
  if (allow_replay) {
    replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay_cmd->add_option("manifest", replay_manifest, "manifest.json")->required();
    replay_cmd->add_option("--out", replay_out, "Write to this location instead");
  }

  try {
    std::vector<std::string> reversed(ctx.args.rbegin(), ctx.args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, ctx.out, ctx.err);
    return code == 0 ? kExitOk : kExitUserError;
  }
  ctx.jobs = jobs;
  ctx.profiles_path = profiles;

  if (perturb_cmd->parsed()) return CmdPerturb(po, ctx);
  if (lsc_cmd->parsed()) return CmdLsc(lo, ctx);
  if (lec_cmd->parsed()) {
    if (eo.src.empty() && eo.m2.empty()) throw std::invalid_argument("lec needs --src or --m2");
    return CmdLec(eo, ctx);
  }
  if (gleu_cmd->parsed()) return CmdGleu(go, ctx);
  if (errant_cmd->parsed()) return CmdErrant(ro, ctx);
  if (agree_cmd->parsed()) return CmdAgreement(ao, ctx);
  if (serve_cmd->parsed()) return CmdServe(so, ctx);
  if (export_cmd->parsed()) return CmdExport(xo, ctx);
  if (stats_cmd->parsed()) return CmdStats(to, ctx);
  if (replay_cmd != nullptr && replay_cmd->parsed()) {
    return CmdReplay(replay_manifest, replay_out, ctx);
  }
  ctx.err << app.help();
  return kExitUserError;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{args, out, err, 4, ""};
  SetWarningSink([&err](std::string_view m) { err << "warning: " << m << "\n"; });
  int code = kExitOk;
  try {
    code = Dispatch(ctx, true);
  } catch (const TransportError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitInternalError;
  } catch (const ProtocolError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitInternalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = kExitUserError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    code = kExitUserError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    code = kExitUserError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    code = kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    code = kExitInternalError;
  }
  SetWarningSink(nullptr);
  return code;
}

}  // namespace perturbench::cli
