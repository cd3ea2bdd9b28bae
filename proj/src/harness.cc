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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <stdexcept>

#include "bundled_prompts.h"
#include "perturbench/common.h"
#include "perturbench/errors.h"

namespace perturbench::harness {
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kChunkUnits = 64;

std::vector<nlohmann::json> ReadJsonLines(const std::string& path,
                                          bool repair_tail) {
  std::vector<nlohmann::json> out;
  if (!fs::exists(path)) return out;
  const std::vector<std::string> lines = ReadLines(path);
  std::size_t good = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(lines[i]));
      good = i + 1;
    } catch (const nlohmann::json::parse_error& e) {
      if (i + 1 == lines.size() && repair_tail) {
        Warn(path + ": dropping incomplete last record");
        break;
      }
      throw ParseError(path + ": " + e.what(), i + 1);
    }
  }
  if (repair_tail && good < lines.size()) {
    std::string kept;
    for (std::size_t i = 0; i < good; ++i) kept += lines[i] + "\n";
    WriteFile(path, kept);
  }
  return out;
}

void AppendLines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot append to " + path);
  for (const std::string& l : lines) out << l << '\n';
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

std::vector<std::string> KindNames(const std::vector<perturb::Kind>& kinds) {
  std::vector<std::string> out;
  for (perturb::Kind k : kinds) out.emplace_back(perturb::KindName(k));
  return out;
}

std::pair<double, double> MeanStd(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

std::size_t DisplayWidth(std::string_view s) { return CodepointStarts(s).size(); }

std::string PadLeft(const std::string& s, std::size_t w) {
  const std::size_t n = DisplayWidth(s);
  return n >= w ? s : std::string(w - n, ' ') + s;
}

std::string PadRight(const std::string& s, std::size_t w) {
  const std::size_t n = DisplayWidth(s);
  return n >= w ? s : s + std::string(w - n, ' ');
}

}  // namespace

// ------------------------------------------------------------------ LSC

void LscRunConfig::Validate() const {
  if (group_size < 1 || group_size > 10) {
    throw std::invalid_argument("group size must be in [1, 10]");
  }
  if (combos.empty()) throw std::invalid_argument("no perturbation combos given");
  for (const auto& c : combos) {
    if (c.empty() || c.size() > 5) {
      throw std::invalid_argument("combo sizes must be in [1, 5]");
    }
  }
  perturb::PerturbationConfig p;
  p.kinds = combos.front();
  p.prob_per_token = prob_per_token;
  p.max_affected_words = max_affected_words;
  p.jaccard_min = jaccard_min;
  p.Validate();
  provider.Validate();
}

nlohmann::json LscRunConfig::ToJson() const {
  nlohmann::json combos_json = nlohmann::json::array();
  for (const auto& c : combos) combos_json.push_back(KindNames(c));
  nlohmann::json provider_json{{"providerId", provider.provider_id},
                               {"modelId", provider.model_id},
                               {"dim", provider.dim},
                               {"maxBatch", provider.max_batch},
                               {"contextWindow", provider.context_window}};
  if (provider.endpoint_url) provider_json["endpointUrl"] = *provider.endpoint_url;
  return {{"corpus", corpus_name},
          {"sentences", sentences.size()},
          {"sentencesDigest", HexDigest(Fnv1a64(JoinStrings(sentences, "\n")))},
          {"combos", combos_json},
          {"provider", provider_json},
          {"groupSize", group_size},
          {"seed", seed},
          {"prob", prob_per_token},
          {"maxWords", max_affected_words},
          {"jaccardMin", jaccard_min},
          {"identity", identity}};
}

embed::SimilarityRecord LscRecord::AsSimilarity() const {
  return {pair_id, similarity.value_or(0.0), provider, combo_label};
}

nlohmann::json ToJson(const LscRecord& r) {
  return {{"combo", r.combo_index},
          {"unit", r.unit_index},
          {"pairId", r.pair_id},
          {"comboLabel", r.combo_label},
          {"provider", r.provider},
          {"clean", r.clean},
          {"corrupt", r.corrupt},
          {"jaccard", r.jaccard},
          {"seed", r.seed},
          {"retained", r.retained},
          {"discardReason", r.discard_reason},
          {"similarity", r.similarity ? nlohmann::json(*r.similarity)
                                      : nlohmann::json(nullptr)},
          {"truncated", r.truncated}};
}

LscRecord LscRecordFromJson(const nlohmann::json& j) {
  LscRecord r;
  r.combo_index = j.at("combo").get<std::size_t>();
  r.unit_index = j.at("unit").get<std::size_t>();
  r.pair_id = j.at("pairId").get<std::string>();
  r.combo_label = j.at("comboLabel").get<std::string>();
  r.provider = j.at("provider").get<std::string>();
  r.clean = j.at("clean").get<std::string>();
  r.corrupt = j.at("corrupt").get<std::string>();
  r.jaccard = j.at("jaccard").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.retained = j.at("retained").get<bool>();
  r.discard_reason = j.at("discardReason").get<std::string>();
  if (!j.at("similarity").is_null()) r.similarity = j.at("similarity").get<double>();
  r.truncated = j.at("truncated").get<bool>();
  return r;
}

std::vector<std::string> GroupSentences(const std::vector<std::string>& sentences,
                                        std::size_t group_size) {
  if (group_size < 1) throw std::invalid_argument("group size must be >= 1");
  std::vector<std::string> units;
  for (std::size_t i = 0; i < sentences.size(); i += group_size) {
    const std::size_t end = std::min(sentences.size(), i + group_size);
    units.push_back(JoinStrings(
        std::vector<std::string>(sentences.begin() + i, sentences.begin() + end),
        " "));
  }
  return units;
}

LscSummary SummarizeLsc(const LscRunConfig& cfg,
                        const std::vector<LscRecord>& records) {
  LscSummary s;
  s.corpus_name = cfg.corpus_name;
  s.provider = cfg.provider.provider_id;
  s.units = (cfg.sentences.size() + cfg.group_size - 1) / cfg.group_size;
  std::vector<std::vector<double>> per_combo(cfg.combos.size());
  std::map<std::size_t, std::vector<double>> per_size;
  std::map<std::size_t, std::size_t> discarded_per_size;
  for (std::size_t c = 0; c < cfg.combos.size(); ++c) {
    ComboSummary cs;
    cs.kinds = cfg.combos[c];
    cs.combo_label = perturb::ComboLabel(cs.kinds);
    s.combos.push_back(std::move(cs));
    per_size[cfg.combos[c].size()];
  }
  for (const LscRecord& r : records) {
    if (r.combo_index >= cfg.combos.size()) {
      throw std::invalid_argument("record refers to unknown combo");
    }
    ComboSummary& cs = s.combos[r.combo_index];
    const std::size_t size = cfg.combos[r.combo_index].size();
    if (r.retained && r.similarity) {
      per_combo[r.combo_index].push_back(*r.similarity);
      per_size[size].push_back(*r.similarity);
      ++cs.sample_count;
    } else {
      ++cs.discarded_count;
      ++discarded_per_size[size];
    }
    if (r.truncated) ++cs.truncated_count;
  }
  for (std::size_t c = 0; c < s.combos.size(); ++c) {
    std::tie(s.combos[c].mean, s.combos[c].std_dev) = MeanStd(per_combo[c]);
  }
  for (const auto& [size, values] : per_size) {
    SizeSummary ss;
    ss.size = size;
    std::tie(ss.mean, ss.std_dev) = MeanStd(values);
    ss.sample_count = values.size();
    ss.discarded_count = discarded_per_size[size];
    s.sizes.push_back(ss);
  }
  return s;
}

LscRun RunLsc(const LscRunConfig& cfg, const perturb::Lexicons& lex) {
  return RunLsc(cfg, lex, embed::MakeProvider(cfg.provider));
}

LscRun RunLsc(const LscRunConfig& cfg, const perturb::Lexicons& lex,
              std::unique_ptr<embed::EmbeddingProvider> provider) {
  cfg.Validate();
  if (cfg.sentences.empty()) throw std::invalid_argument("LSC corpus is empty");
  const std::vector<std::string> units =
      GroupSentences(cfg.sentences, cfg.group_size);

  std::string records_path;
  std::shared_ptr<embed::EmbeddingCache> cache;
  std::vector<LscRecord> records;
  std::set<std::pair<std::size_t, std::size_t>> done;
  if (cfg.run_dir) {
    fs::create_directories(*cfg.run_dir);
    const std::string config_path = *cfg.run_dir + "/config.json";
    const std::string snapshot = cfg.ToJson().dump(2) + "\n";
    if (fs::exists(config_path)) {
      if (ReadFile(config_path) != snapshot) {
        throw ConfigError(*cfg.run_dir +
                          " holds a run with a different configuration");
      }
    } else {
      WriteFile(config_path, snapshot);
    }
    records_path = *cfg.run_dir + "/records.jsonl";
    for (const auto& j : ReadJsonLines(records_path, /*repair_tail=*/true)) {
      LscRecord r = LscRecordFromJson(j);
      done.insert({r.combo_index, r.unit_index});
      records.push_back(std::move(r));
    }
    cache = std::make_shared<embed::EmbeddingCache>(
        cfg.cache_path.value_or(*cfg.run_dir + "/embeddings.cache"));
  } else if (cfg.cache_path) {
    cache = std::make_shared<embed::EmbeddingCache>(*cfg.cache_path);
  }
  const std::string provider_id = provider->spec().provider_id;
  embed::Embedder embedder(std::move(provider), cache, cfg.max_in_flight);

  for (std::size_t c = 0; c < cfg.combos.size(); ++c) {
    perturb::PerturbationConfig pcfg;
    pcfg.kinds = cfg.combos[c];
    pcfg.prob_per_token = cfg.prob_per_token;
    pcfg.max_affected_words = cfg.max_affected_words;
    pcfg.jaccard_min = cfg.jaccard_min;
    pcfg.seed = cfg.seed;
    const std::string label = perturb::ComboLabel(pcfg.kinds);

    std::vector<std::size_t> pending;
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (done.count({c, u}) == 0) pending.push_back(u);
    }
    for (std::size_t begin = 0; begin < pending.size(); begin += kChunkUnits) {
      const std::size_t end = std::min(pending.size(), begin + kChunkUnits);
      std::vector<LscRecord> chunk(end - begin);
      ParallelFor(chunk.size(), cfg.jobs, [&](std::size_t k) {
        const std::size_t u = pending[begin + k];
        const std::string pair_id = std::to_string(c) + ":" + std::to_string(u);
        const perturb::ChainOutcome out =
            perturb::RunChain(units[u], pcfg, lex, pair_id);
        LscRecord& r = chunk[k];
        r.combo_index = c;
        r.unit_index = u;
        r.pair_id = pair_id;
        r.combo_label = label;
        r.provider = provider_id;
        r.clean = out.pair.clean;
        r.corrupt = out.pair.corrupt;
        r.jaccard = out.pair.jaccard;
        r.seed = out.pair.seed;
        r.retained = out.retained;
        r.discard_reason = out.discard_reason;
      });
      std::vector<std::string> texts;
      std::vector<std::size_t> owners;
      for (std::size_t k = 0; k < chunk.size(); ++k) {
        if (!chunk[k].retained) continue;
        texts.push_back(chunk[k].clean);
        texts.push_back(cfg.identity ? chunk[k].clean : chunk[k].corrupt);
        owners.push_back(k);
      }
      if (!texts.empty()) {
        const embed::EmbedBatchResult emb = embedder.EmbedBatch(texts);
        for (std::size_t i = 0; i < owners.size(); ++i) {
          LscRecord& r = chunk[owners[i]];
          r.truncated = emb.truncated[2 * i] || emb.truncated[2 * i + 1];
          try {
            r.similarity = embed::Cosine(emb.vectors[2 * i], emb.vectors[2 * i + 1]);
          } catch (const UndefinedSimilarity& e) {
            r.retained = false;
            r.discard_reason = e.what();
          }
        }
      }
      if (!records_path.empty()) {
        std::vector<std::string> lines;
        for (const auto& r : chunk) lines.push_back(ToJson(r).dump());
        AppendLines(records_path, lines);
      }
      for (auto& r : chunk) records.push_back(std::move(r));
    }
  }

  std::sort(records.begin(), records.end(),
            [](const LscRecord& a, const LscRecord& b) {
              return std::tie(a.combo_index, a.unit_index) <
                     std::tie(b.combo_index, b.unit_index);
            });
  LscRun run;
  run.summary = SummarizeLsc(cfg, records);
  run.records = std::move(records);
  if (cfg.run_dir) {
    WriteFile(*cfg.run_dir + "/summary.json", ToJson(run.summary).dump(2) + "\n");
    WriteFile(*cfg.run_dir + "/summary.txt",
              RenderLscTable({run.summary}) + "\n" + RenderComboTable(run.summary));
  }
  return run;
}

nlohmann::json ToJson(const LscSummary& s) {
  nlohmann::json combos = nlohmann::json::array();
  for (const auto& c : s.combos) {
    combos.push_back({{"comboLabel", c.combo_label},
                      {"kinds", KindNames(c.kinds)},
                      {"mean", c.mean},
                      {"stdDev", c.std_dev},
                      {"sampleCount", c.sample_count},
                      {"discardedCount", c.discarded_count},
                      {"truncatedCount", c.truncated_count}});
  }
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& z : s.sizes) {
    sizes.push_back({{"size", z.size},
                     {"mean", z.mean},
                     {"stdDev", z.std_dev},
                     {"sampleCount", z.sample_count},
                     {"discardedCount", z.discarded_count}});
  }
  return {{"corpus", s.corpus_name},
          {"provider", s.provider},
          {"units", s.units},
          {"combos", combos},
          {"sizes", sizes}};
}

std::string RenderLscTable(const std::vector<LscSummary>& summaries) {
  std::vector<std::string> corpora;
  std::vector<std::string> providers;
  for (const auto& s : summaries) {
    if (std::find(corpora.begin(), corpora.end(), s.corpus_name) == corpora.end()) {
      corpora.push_back(s.corpus_name);
    }
    if (std::find(providers.begin(), providers.end(), s.provider) == providers.end()) {
      providers.push_back(s.provider);
    }
  }
  std::vector<std::vector<std::string>> rows;
  for (const auto& corpus : corpora) {
    std::set<std::size_t> sizes;
    for (const auto& s : summaries) {
      if (s.corpus_name != corpus) continue;
      for (const auto& z : s.sizes) sizes.insert(z.size);
    }
    for (std::size_t k : sizes) {
      std::vector<std::string> row{corpus + "+" + std::to_string(k) + "P"};
      for (const auto& p : providers) {
        const SizeSummary* found = nullptr;
        for (const auto& s : summaries) {
          if (s.corpus_name != corpus || s.provider != p) continue;
          for (const auto& z : s.sizes) {
            if (z.size == k && z.sample_count > 0) found = &z;
          }
        }
        if (found == nullptr) {
          row.push_back("-");
          row.push_back("-");
        } else {
          row.push_back(std::to_string(std::lround(100.0 * found->mean)));
          row.push_back(FormatFixed(100.0 * found->std_dev, 1));
        }
      }
      rows.push_back(std::move(row));
    }
  }
  std::size_t w0 = DisplayWidth("Perturbation");
  for (const auto& r : rows) w0 = std::max(w0, DisplayWidth(r[0]));
  std::size_t wc = 5;
  for (const auto& p : providers) wc = std::max(wc, (DisplayWidth(p) + 1) / 2 + 1);
  std::string out = PadRight("", w0);
  for (const auto& p : providers) out += "  " + PadLeft(p, 2 * wc + 2);
  out += "\n" + PadRight("Perturbation", w0);
  for (std::size_t i = 0; i < providers.size(); ++i) {
    out += "  " + PadLeft("μ", wc) + "  " + PadLeft("σ", wc);
  }
  out += "\n";
  for (const auto& r : rows) {
    out += PadRight(r[0], w0);
    for (std::size_t i = 1; i < r.size(); ++i) out += "  " + PadLeft(r[i], wc);
    out += "\n";
  }
  return out;
}

std::string RenderComboTable(const LscSummary& s) {
  std::size_t w0 = DisplayWidth("Combo");
  for (const auto& c : s.combos) w0 = std::max(w0, DisplayWidth(c.combo_label));
  std::string out = PadRight("Combo", w0) + "  " + PadLeft("μ", 8) + "  " +
                    PadLeft("σ", 8) + "  " + PadLeft("kept", 6) + "  " +
                    PadLeft("dropped", 7) + "\n";
  for (const auto& c : s.combos) {
    out += PadRight(c.combo_label, w0) + "  " +
           PadLeft(FormatFixed(c.mean, 4), 8) + "  " +
           PadLeft(FormatFixed(c.std_dev, 4), 8) + "  " +
           PadLeft(std::to_string(c.sample_count), 6) + "  " +
           PadLeft(std::to_string(c.discarded_count), 7) + "\n";
  }
  return out;
}

// ------------------------------------------------------------------ LEC

PromptTemplate PromptTemplate::Default() {
  return FromText(std::string(bundled::kLecPrompt));
}

PromptTemplate PromptTemplate::FromText(std::string text) {
  PromptTemplate t;
  t.text = std::move(text);
  t.Validate();
  return t;
}

void PromptTemplate::Validate() const {
  const std::size_t first = text.find(placeholder);
  if (first == std::string::npos) {
    throw ConfigError("prompt template lacks the placeholder " + placeholder);
  }
  if (text.find(placeholder, first + 1) != std::string::npos) {
    throw ConfigError("prompt template repeats the placeholder " + placeholder);
  }
}

RenderedPrompt RenderPrompt(std::string_view sentence, const PromptTemplate& t) {
  if (sentence.empty()) throw std::invalid_argument("cannot prompt with an empty sentence");
  const std::size_t at = t.text.find(t.placeholder);
  if (at == std::string::npos) {
    throw ConfigError("prompt template lacks the placeholder " + t.placeholder);
  }
  RenderedPrompt r;
  r.text = t.text.substr(0, at);
  r.text += sentence;
  r.text += t.text.substr(at + t.placeholder.size());
  if (!t.delimiter.empty() && sentence.find(t.delimiter) != std::string_view::npos) {
    r.delimiter_in_input = true;
    r.note = "input contains the delimiter '" + t.delimiter + "'; passed verbatim";
  }
  return r;
}

std::string ExtractInput(std::string_view rendered, const PromptTemplate& t) {
  const std::size_t at = t.text.find(t.placeholder);
  if (at == std::string::npos) {
    throw ConfigError("prompt template lacks the placeholder " + t.placeholder);
  }
  const std::string_view prefix = std::string_view(t.text).substr(0, at);
  const std::string_view suffix =
      std::string_view(t.text).substr(at + t.placeholder.size());
  if (rendered.size() < prefix.size() + suffix.size() ||
      rendered.substr(0, prefix.size()) != prefix ||
      rendered.substr(rendered.size() - suffix.size()) != suffix) {
    throw std::invalid_argument("text was not rendered from this template");
  }
  return std::string(rendered.substr(
      prefix.size(), rendered.size() - prefix.size() - suffix.size()));
}

void GenerationParams::Validate() const {
  if (temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

ChatResponse IdentityChatProvider::Complete(const ChatRequest& request) {
  return {request.source, 0.0};
}

HttpChatProvider::HttpChatProvider(std::string provider_id,
                                   std::string endpoint_url,
                                   std::string model_id, std::string api_key,
                                   http::RetryPolicy retry)
    : provider_id_(std::move(provider_id)),
      endpoint_url_(std::move(endpoint_url)),
      model_id_(std::move(model_id)),
      api_key_(std::move(api_key)),
      retry_(retry) {
  http::ParseUrl(endpoint_url_);
}

nlohmann::json HttpChatProvider::BuildRequest(const std::string& model_id,
                                              const ChatRequest& request) {
  return {{"model", model_id},
          {"messages",
           nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})},
          {"temperature", request.params.temperature},
          {"frequency_penalty", request.params.frequency_penalty},
          {"presence_penalty", request.params.presence_penalty},
          {"max_tokens", request.params.max_tokens}};
}

std::string HttpChatProvider::ParseReply(const nlohmann::json& reply) {
  auto text_of = [](const nlohmann::json& j) -> const nlohmann::json* {
    if (j.is_object() && j.contains("message") && j["message"].is_object() &&
        j["message"].contains("content") && j["message"]["content"].is_string()) {
      return &j["message"]["content"];
    }
    if (j.is_object() && j.contains("text") && j["text"].is_string()) return &j["text"];
    return nullptr;
  };
  if (reply.is_object()) {
    if (reply.contains("choices") && reply["choices"].is_array() &&
        !reply["choices"].empty()) {
      if (const auto* t = text_of(reply["choices"][0])) return t->get<std::string>();
    }
    if (const auto* t = text_of(reply)) return t->get<std::string>();
    for (const char* key : {"content", "output_text", "response"}) {
      if (reply.contains(key) && reply[key].is_string()) {
        return reply[key].get<std::string>();
      }
    }
  }
  throw ProtocolError("chat reply carries no message text");
}

ChatResponse HttpChatProvider::Complete(const ChatRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  const nlohmann::json reply =
      http::PostJson(endpoint_url_, BuildRequest(model_id_, request), api_key_, retry_);
  ChatResponse r;
  r.text = ParseReply(reply);
  r.latency_ms = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  return r;
}

namespace {

std::string StripLabel(std::string_view line) {
  static const std::regex kLabel(
      R"(^\s*(?:the\s+)?(?:(?:corrected|correct|revised|fixed|final|output)(?:\s+(?:input\s+)?(?:sentence|version|text))?|correction|answer|output)\s*:\s*)",
      std::regex::icase);
  std::string s(line);
  std::smatch m;
  if (std::regex_search(s, m, kLabel) && m.position(0) == 0) {
    s = s.substr(static_cast<std::size_t>(m.length(0)));
  }
  return std::string(Trim(s));
}

std::string StripQuotes(std::string s) {
  const std::pair<std::string_view, std::string_view> pairs[] = {
      {"\"", "\""}, {"'", "'"}, {"“", "”"}, {"‘", "’"}, {"`", "`"}};
  for (const auto& [open, close] : pairs) {
    if (s.size() >= open.size() + close.size() && s.rfind(open, 0) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
      return std::string(Trim(s.substr(open.size(), s.size() - open.size() - close.size())));
    }
  }
  return s;
}

std::string StripDelimiter(std::string s, std::string_view delimiter) {
  if (delimiter.empty()) return s;
  if (s.rfind(delimiter, 0) == 0) s = std::string(Trim(s.substr(delimiter.size())));
  if (s.size() >= delimiter.size() &&
      s.compare(s.size() - delimiter.size(), delimiter.size(), delimiter) == 0) {
    s = std::string(Trim(s.substr(0, s.size() - delimiter.size())));
  }
  return s;
}

}  // namespace

ExtractedAnswer ExtractAnswer(std::string_view raw, std::string_view delimiter) {
  std::vector<std::string> lines;
  for (const std::string& l : SplitString(raw, '\n')) {
    std::string s(Trim(l));
    if (s.rfind("```", 0) == 0) continue;
    s = StripDelimiter(std::move(s), delimiter);
    if (!s.empty()) lines.push_back(std::move(s));
  }
  ExtractedAnswer a;
  std::size_t used = 0;
  while (used < lines.size() && a.text.empty()) {
    a.text = StripQuotes(StripLabel(lines[used]));
    ++used;
  }
  if (a.text.empty()) {
    a.flags.push_back("empty");
  } else if (used < lines.size()) {
    a.flags.push_back("multi-line");
  }
  return a;
}

nlohmann::json ToJson(const CorrectionResult& r) {
  nlohmann::json j{{"id", r.id},
                   {"source", r.source},
                   {"hypothesis", r.hypothesis},
                   {"provider", r.provider},
                   {"latencyMs", r.latency_ms},
                   {"rawResponse", r.raw_response},
                   {"flags", r.flags}};
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j;
}

CorrectionResult CorrectionFromJson(const nlohmann::json& j) {
  CorrectionResult r;
  r.id = j.at("id").get<std::string>();
  r.source = j.at("source").get<std::string>();
  r.hypothesis = j.at("hypothesis").get<std::string>();
  r.provider = j.at("provider").get<std::string>();
  r.latency_ms = j.at("latencyMs").get<double>();
  r.raw_response = j.at("rawResponse").get<std::string>();
  r.flags = j.at("flags").get<std::vector<std::string>>();
  if (j.contains("error") && !j.at("error").is_null()) {
    r.error = j.at("error").get<std::string>();
  }
  return r;
}

std::vector<LecItem> ItemsFromSources(const std::vector<std::string>& sources) {
  std::vector<LecItem> items;
  items.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    items.push_back({std::to_string(i), sources[i]});
  }
  return items;
}

std::vector<CorrectionResult> RunLec(const std::vector<LecItem>& items,
                                     ChatProvider& provider,
                                     const LecRunConfig& cfg) {
  cfg.params.Validate();
  cfg.prompt.Validate();
  std::map<std::string, CorrectionResult> completed;
  std::string log_path;
  if (cfg.run_dir) {
    fs::create_directories(*cfg.run_dir);
    log_path = *cfg.run_dir + "/corrections.jsonl";
    for (const auto& j : ReadJsonLines(log_path, /*repair_tail=*/true)) {
      CorrectionResult r = CorrectionFromJson(j);
      if (!r.error) completed[r.id] = std::move(r);  // errors are retried
    }
  }

  std::vector<CorrectionResult> results(items.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto it = completed.find(items[i].id);
    if (it != completed.end() && it->second.source == items[i].source) {
      results[i] = it->second;
    } else {
      pending.push_back(i);
    }
  }

  std::mutex log_mutex;
  ParallelFor(pending.size(), cfg.jobs, [&](std::size_t k) {
    const LecItem& item = items[pending[k]];
    CorrectionResult r;
    r.id = item.id;
    r.source = item.source;
    r.provider = provider.id();
    try {
      const RenderedPrompt prompt = RenderPrompt(item.source, cfg.prompt);
      if (prompt.delimiter_in_input) r.flags.push_back("delimiter-in-input");
      const ChatResponse resp =
          provider.Complete({prompt.text, item.source, cfg.params});
      r.raw_response = resp.text;
      r.latency_ms = resp.latency_ms;
      ExtractedAnswer answer = ExtractAnswer(resp.text, cfg.prompt.delimiter);
      r.hypothesis = std::move(answer.text);
      for (auto& f : answer.flags) r.flags.push_back(std::move(f));
    } catch (const std::exception& e) {
      r.error = e.what();
      r.hypothesis.clear();
      r.flags.push_back("error");
    }
    if (!log_path.empty()) {
      std::lock_guard lock(log_mutex);
      AppendLines(log_path, {ToJson(r).dump()});
    }
    results[pending[k]] = std::move(r);
  });

  if (cfg.run_dir) {
    std::string hyps;
    std::string ordered;
    for (const auto& r : results) {
      hyps += r.hypothesis + "\n";
      ordered += ToJson(r).dump() + "\n";
    }
    WriteFile(*cfg.run_dir + "/hypotheses.txt", hyps);
    WriteFile(*cfg.run_dir + "/results.jsonl", ordered);
  }
  return results;
}

}  // namespace perturbench::harness
