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

#ifndef PERTURBENCH_ANNOTATION_H_
#define PERTURBENCH_ANNOTATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "perturbench/metrics.h"
#include "json.hpp"

namespace httplib {
class Server;
}  // namespace httplib

namespace perturbench::annotation {

enum class Choice { kA, kB, kSame, kUndecided };

std::string_view ChoiceName(Choice c);  // "A", "B", "same", "undecided"
// Case-insensitive; also accepts "1".."4". Throws std::invalid_argument.
Choice ParseChoice(std::string_view name);

// Annotator instructions shown with every task.
const std::vector<std::string>& Instructions();

struct StudyConfig {
  std::size_t tasks_per_dataset = 100;
  std::size_t annotators_per_task = 3;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct SourceItem {
  std::string id;
  std::string original;
};

// One dataset's pool of sentences plus both correction sets keyed by id.
struct DatasetCorrections {
  std::string dataset;
  std::vector<SourceItem> items;
  std::map<std::string, std::string> system;
  std::map<std::string, std::string> human;
};

struct AnnotationTask {
  int task_id = 0;  // 1-based
  std::string source_id;
  std::string dataset;
  std::string original;
  std::string option_a;
  std::string option_b;
  bool system_is_a = true;  // never sent to annotators

  const std::string& system_correction() const {
    return system_is_a ? option_a : option_b;
  }
  const std::string& human_correction() const {
    return system_is_a ? option_b : option_a;
  }
};

// Samples tasks_per_dataset ids from each dataset (ascending id order within
// the sample) and blinds each task with a seeded coin. Throws
// std::invalid_argument listing sampled ids that lack a correction.
std::vector<AnnotationTask> CreateStudy(
    const std::vector<DatasetCorrections>& datasets, const StudyConfig& cfg);

struct AnnotationLabel {
  int task_id = 0;
  std::string annotator_id;
  Choice choice = Choice::kUndecided;
  metrics::Preference resolved = metrics::Preference::kUndecided;
  std::string timestamp;
};

metrics::Preference Resolve(const AnnotationTask& task, Choice choice);

struct Progress {
  std::size_t done = 0;
  std::size_t total = 0;
};

// What an annotator sees: no blinding information.
struct TaskView {
  int task_id = 0;
  std::string original;
  std::string option_a;
  std::string option_b;
  std::vector<std::string> instructions;
  Progress progress;
};

nlohmann::json ToJson(const TaskView& v);

struct ExportedLabel {
  std::string annotator_id;
  metrics::Preference resolved = metrics::Preference::kUndecided;
  std::string timestamp;
};

struct ExportedTask {
  int task_id = 0;
  std::string source_id;
  std::string dataset;
  std::string original;
  std::string system_correction;
  std::string human_correction;
  std::vector<ExportedLabel> labels;
};

struct StudyExport {
  std::vector<ExportedTask> tasks;
};

// JSON lines: a header record {format, version, tasks} then one record per
// task in ascending id order.
std::string SerializeExport(const StudyExport& e);
// Throws ParseError.
StudyExport ParseExport(std::string_view contents);
std::vector<metrics::PreferenceRecord> ToPreferenceRecords(const StudyExport& e);

// Thread-safe study state. With a store directory, tasks are kept in
// study.json, labels are appended to labels.jsonl, and snapshot.json is
// rewritten every `snapshot_every` labels; reopening replays the log.
class Study {
 public:
  using Clock = std::function<std::string()>;

  Study(std::vector<AnnotationTask> tasks, StudyConfig cfg,
        std::optional<std::string> store_dir = std::nullopt);

  // Reopens a persisted study. Throws Error when the directory has none.
  static std::unique_ptr<Study> Open(const std::string& store_dir);

  void set_clock(Clock clock) { clock_ = std::move(clock); }
  void set_snapshot_every(std::size_t n) { snapshot_every_ = n == 0 ? 1 : n; }

  // Lowest-id task this annotator has not labeled and that still has room.
  std::optional<TaskView> NextTask(const std::string& annotator_id) const;

  // Throws NotFound for an unknown task, Conflict for a repeated label or a
  // full task, std::invalid_argument for an empty annotator id.
  AnnotationLabel SubmitLabel(const std::string& annotator_id, int task_id,
                              Choice choice);

  metrics::AgreementSummary Stats() const;
  nlohmann::json StatsJson() const;
  StudyExport Export() const;
  void ExportTo(const std::string& path) const;

  std::size_t task_count() const { return tasks_.size(); }
  std::size_t label_count() const;
  std::vector<AnnotationLabel> Labels() const;
  const StudyConfig& config() const { return cfg_; }
  const std::vector<AnnotationTask>& tasks() const { return tasks_; }

 private:
  void Persist(const AnnotationLabel& label);
  void WriteSnapshot() const;
  std::vector<metrics::PreferenceRecord> Records() const;
  const AnnotationTask* FindTask(int task_id) const;

  std::vector<AnnotationTask> tasks_;
  StudyConfig cfg_;
  std::optional<std::string> store_dir_;
  Clock clock_;
  std::size_t snapshot_every_ = 50;

  mutable std::shared_mutex mutex_;
  std::vector<AnnotationLabel> labels_;
  std::map<int, std::vector<std::size_t>> labels_by_task_;
};

nlohmann::json ToJson(const AnnotationTask& t);  // includes blinding
AnnotationTask TaskFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const AnnotationLabel& l);
AnnotationLabel LabelFromJson(const nlohmann::json& j);

// HTTP front end:
//   GET  /api/tasks/next?annotator=ID
//   POST /api/tasks/{id}/label   {"annotator": ID, "choice": "A"|"B"|"same"|"undecided"}
//   GET  /api/stats
//   GET  /api/export
//   GET  /          static UI files (or a placeholder page)
// Errors are {"code", "message"} with a matching HTTP status.
class AnnotationServer {
 public:
  AnnotationServer(Study& study, std::optional<std::string> ui_dir = std::nullopt);
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port.
  int Start(const std::string& host = "127.0.0.1", int port = 0);
  // Serves on the calling thread until Stop().
  void Run(const std::string& host, int port);
  void Stop();

 private:
  void Routes();

  Study& study_;
  std::optional<std::string> ui_dir_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace perturbench::annotation

#endif  // PERTURBENCH_ANNOTATION_H_
