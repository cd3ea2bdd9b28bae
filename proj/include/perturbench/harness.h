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

#ifndef PERTURBENCH_HARNESS_H_
#define PERTURBENCH_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perturbench/embed.h"
#include "perturbench/http.h"
#include "perturbench/lexicons.h"
#include "perturbench/perturb.h"
#include "json.hpp"

namespace perturbench::harness {

// ------------------------------------------------------------------ LSC

struct LscRunConfig {
  std::string corpus_name = "corpus";
  std::vector<std::string> sentences;
  std::vector<std::vector<perturb::Kind>> combos;
  embed::ProviderSpec provider = embed::ProviderSpec::Local();
  std::size_t group_size = 1;
  std::uint64_t seed = 0;
  double prob_per_token = 0.30;
  std::size_t max_affected_words = 10;
  double jaccard_min = 0.70;
  // Embeds the clean text on both sides (pipeline sanity check).
  bool identity = false;
  // Checkpoint, records and summary live here when set.
  std::optional<std::string> run_dir;
  // Defaults to <run_dir>/embeddings.cache.
  std::optional<std::string> cache_path;
  std::size_t jobs = 1;
  std::size_t max_in_flight = 4;

  // Throws std::invalid_argument.
  void Validate() const;
  nlohmann::json ToJson() const;  // snapshot without the sentences
};

// One attempted (combo, unit) pair. Discarded pairs carry no similarity.
struct LscRecord {
  std::size_t combo_index = 0;
  std::size_t unit_index = 0;
  std::string pair_id;
  std::string combo_label;
  std::string provider;
  std::string clean;
  std::string corrupt;
  double jaccard = 1.0;
  std::uint64_t seed = 0;
  bool retained = false;
  std::string discard_reason;
  std::optional<double> similarity;
  bool truncated = false;

  embed::SimilarityRecord AsSimilarity() const;
};

nlohmann::json ToJson(const LscRecord& r);
LscRecord LscRecordFromJson(const nlohmann::json& j);

struct ComboSummary {
  std::string combo_label;
  std::vector<perturb::Kind> kinds;
  double mean = 0.0;
  double std_dev = 0.0;  // population
  std::size_t sample_count = 0;
  std::size_t discarded_count = 0;
  std::size_t truncated_count = 0;
};

// Pooled over all combos with the same number of kinds.
struct SizeSummary {
  std::size_t size = 0;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t sample_count = 0;
  std::size_t discarded_count = 0;
};

struct LscSummary {
  std::string corpus_name;
  std::string provider;
  std::size_t units = 0;
  std::vector<ComboSummary> combos;
  std::vector<SizeSummary> sizes;
};

struct LscRun {
  LscSummary summary;
  std::vector<LscRecord> records;  // ordered by (combo, unit)
};

// Groups of group_size consecutive sentences joined by a space.
std::vector<std::string> GroupSentences(const std::vector<std::string>& sentences,
                                        std::size_t group_size);

// Mean and population standard deviation of retained records, per combo and
// pooled per combo size.
LscSummary SummarizeLsc(const LscRunConfig& cfg,
                        const std::vector<LscRecord>& records);

// Perturbs every unit with every combo, embeds clean and corrupt text and
// aggregates cosine similarity. With a run directory, records are appended
// to records.jsonl as they complete and a rerun resumes after the last
// completed record. Throws std::invalid_argument for an empty corpus and
// ConfigError when the run directory belongs to a different configuration.
LscRun RunLsc(const LscRunConfig& cfg,
              const perturb::Lexicons& lex = perturb::Lexicons::Bundled());
// As above with a caller-supplied provider (used for the embedding calls).
LscRun RunLsc(const LscRunConfig& cfg, const perturb::Lexicons& lex,
              std::unique_ptr<embed::EmbeddingProvider> provider);

nlohmann::json ToJson(const LscSummary& s);
// Rows <corpus>+<k>P, one mu/sigma column pair per provider; mu as
// round(100 mu), sigma as 100 sigma with one decimal.
std::string RenderLscTable(const std::vector<LscSummary>& summaries);
// One row per combo label (the data behind a combo heatmap).
std::string RenderComboTable(const LscSummary& s);

// ------------------------------------------------------------------ LEC

struct PromptTemplate {
  std::string text;  // contains the placeholder exactly once
  std::string delimiter = "###";
  std::string placeholder = "{input_sentence}";

  static PromptTemplate Default();
  // Throws ConfigError when the placeholder is missing or repeated.
  static PromptTemplate FromText(std::string text);
  void Validate() const;
};

struct RenderedPrompt {
  std::string text;
  // Set when the sentence itself contains the delimiter; the sentence is
  // still passed through verbatim.
  bool delimiter_in_input = false;
  std::string note;
};

// Throws std::invalid_argument on an empty sentence.
RenderedPrompt RenderPrompt(std::string_view sentence,
                            const PromptTemplate& t = PromptTemplate::Default());
// Inverse of RenderPrompt. Throws std::invalid_argument when `rendered` does
// not come from `t`.
std::string ExtractInput(std::string_view rendered,
                         const PromptTemplate& t = PromptTemplate::Default());

struct GenerationParams {
  double temperature = 0.0;
  double frequency_penalty = 0.0;
  double presence_penalty = 0.0;
  int max_tokens = 1000;

  void Validate() const;
};

struct ChatRequest {
  std::string prompt;
  std::string source;  // the sentence inside the prompt
  GenerationParams params;
};

struct ChatResponse {
  std::string text;
  double latency_ms = 0.0;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string id() const = 0;
  // Throws on failure; the runner records the error and moves on.
  virtual ChatResponse Complete(const ChatRequest& request) = 0;
};

// Returns the source sentence unchanged.
class IdentityChatProvider : public ChatProvider {
 public:
  std::string id() const override { return "identity"; }
  ChatResponse Complete(const ChatRequest& request) override;
};

// Chat-completion endpoint: {model, messages: [{role, content}],
// temperature, frequency_penalty, presence_penalty, max_tokens}.
class HttpChatProvider : public ChatProvider {
 public:
  HttpChatProvider(std::string provider_id, std::string endpoint_url,
                   std::string model_id, std::string api_key,
                   http::RetryPolicy retry = {});
  std::string id() const override { return provider_id_; }
  ChatResponse Complete(const ChatRequest& request) override;

  static nlohmann::json BuildRequest(const std::string& model_id,
                                     const ChatRequest& request);
  // Throws ProtocolError when no message text is present.
  static std::string ParseReply(const nlohmann::json& reply);

 private:
  std::string provider_id_;
  std::string endpoint_url_;
  std::string model_id_;
  std::string api_key_;
  http::RetryPolicy retry_;
};

struct ExtractedAnswer {
  std::string text;
  std::vector<std::string> flags;  // "multi-line", "empty", ...
};

// Strips code fences, delimiter lines, "Corrected sentence:"-style labels and
// surrounding quotes. A multi-line answer yields its first non-empty line.
ExtractedAnswer ExtractAnswer(std::string_view raw,
                              std::string_view delimiter = "###");

struct LecItem {
  std::string id;
  std::string source;
};

struct CorrectionResult {
  std::string id;
  std::string source;
  std::string hypothesis;
  std::string provider;
  double latency_ms = 0.0;
  std::string raw_response;
  std::vector<std::string> flags;
  std::optional<std::string> error;
};

nlohmann::json ToJson(const CorrectionResult& r);
CorrectionResult CorrectionFromJson(const nlohmann::json& j);

struct LecRunConfig {
  GenerationParams params;
  PromptTemplate prompt = PromptTemplate::Default();
  // corrections.jsonl (checkpoint) and hypotheses.txt live here when set.
  std::optional<std::string> run_dir;
  std::size_t jobs = 1;
};

// Renders, calls and extracts every item. Provider errors become per-item
// error records with an empty, flagged hypothesis. Completed items found in
// the run directory are not requested again.
std::vector<CorrectionResult> RunLec(const std::vector<LecItem>& items,
                                     ChatProvider& provider,
                                     const LecRunConfig& cfg = {});

std::vector<LecItem> ItemsFromSources(const std::vector<std::string>& sources);

}  // namespace perturbench::harness

#endif  // PERTURBENCH_HARNESS_H_
