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

#include "perturbench/annotation.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>

#include "bundled_prompts.h"
#include "httplib.h"
#include "perturbench/common.h"
#include "perturbench/corpus.h"
#include "perturbench/errors.h"

namespace perturbench::annotation {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kExportFormat = "perturbench-preferences";
constexpr int kExportVersion = 1;

}  // namespace

std::string_view ChoiceName(Choice c) {
  switch (c) {
    case Choice::kA:
      return "A";
    case Choice::kB:
      return "B";
    case Choice::kSame:
      return "same";
    case Choice::kUndecided:
      return "undecided";
  }
  return "undecided";
}

Choice ParseChoice(std::string_view name) {
  const std::string s = AsciiLower(Trim(name));
  if (s == "a" || s == "1") return Choice::kA;
  if (s == "b" || s == "2") return Choice::kB;
  if (s == "same" || s == "3") return Choice::kSame;
  if (s == "undecided" || s == "4") return Choice::kUndecided;
  throw std::invalid_argument("unknown choice '" + std::string(name) + "'");
}

const std::vector<std::string>& Instructions() {
  static const std::vector<std::string> kInstructions = [] {
    std::vector<std::string> out;
    for (const std::string& line : SplitString(bundled::kAnnotatorInstructions, '\n')) {
      if (!Trim(line).empty()) out.emplace_back(Trim(line));
    }
    return out;
  }();
  return kInstructions;
}

void StudyConfig::Validate() const {
  if (annotators_per_task < 1) {
    throw std::invalid_argument("annotators per task must be >= 1");
  }
}

std::vector<AnnotationTask> CreateStudy(
    const std::vector<DatasetCorrections>& datasets, const StudyConfig& cfg) {
  cfg.Validate();
  std::vector<AnnotationTask> tasks;
  std::vector<std::string> missing;
  int next_id = 1;
  for (const DatasetCorrections& d : datasets) {
    const std::vector<std::size_t> sample = corpus::SampleIndices(
        d.items.size(), cfg.tasks_per_dataset, DeriveSeed(cfg.seed, d.dataset, 0));
    for (std::size_t index : sample) {
      const SourceItem& item = d.items[index];
      const auto sys = d.system.find(item.id);
      const auto hum = d.human.find(item.id);
      if (sys == d.system.end() || hum == d.human.end() || sys->second.empty() ||
          hum->second.empty()) {
        missing.push_back(d.dataset + "/" + item.id);
        continue;
      }
      AnnotationTask t;
      t.task_id = next_id++;
      t.source_id = item.id;
      t.dataset = d.dataset;
      t.original = item.original;
      RandomStream coin(DeriveSeed(cfg.seed, "blind", static_cast<std::uint64_t>(t.task_id)));
      t.system_is_a = coin.Bernoulli(0.5);
      t.option_a = t.system_is_a ? sys->second : hum->second;
      t.option_b = t.system_is_a ? hum->second : sys->second;
      tasks.push_back(std::move(t));
    }
  }
  if (!missing.empty()) {
    throw std::invalid_argument("missing corrections for sampled ids: " +
                                JoinStrings(missing, ", "));
  }
  return tasks;
}

metrics::Preference Resolve(const AnnotationTask& task, Choice choice) {
  switch (choice) {
    case Choice::kA:
      return task.system_is_a ? metrics::Preference::kSystem
                              : metrics::Preference::kHuman;
    case Choice::kB:
      return task.system_is_a ? metrics::Preference::kHuman
                              : metrics::Preference::kSystem;
    case Choice::kSame:
      return metrics::Preference::kSame;
    case Choice::kUndecided:
      return metrics::Preference::kUndecided;
  }
  return metrics::Preference::kUndecided;
}

nlohmann::json ToJson(const TaskView& v) {
  return {{"taskId", v.task_id},
          {"original", v.original},
          {"optionA", v.option_a},
          {"optionB", v.option_b},
          {"instructions", v.instructions},
          {"progress", {{"done", v.progress.done}, {"total", v.progress.total}}}};
}

// ------------------------------------------------------------ export

std::string SerializeExport(const StudyExport& e) {
  std::string out = ojson{{"format", kExportFormat},
                          {"version", kExportVersion},
                          {"tasks", e.tasks.size()}}
                        .dump() +
                    "\n";
  for (const ExportedTask& t : e.tasks) {
    ojson labels = ojson::array();
    for (const ExportedLabel& l : t.labels) {
      labels.push_back({{"annotatorId", l.annotator_id},
                        {"resolvedChoice", metrics::PreferenceName(l.resolved)},
                        {"timestamp", l.timestamp}});
    }
    out += ojson{{"taskId", t.task_id},
                 {"sourceId", t.source_id},
                 {"dataset", t.dataset},
                 {"original", t.original},
                 {"systemCorrection", t.system_correction},
                 {"humanCorrection", t.human_correction},
                 {"labels", labels}}
               .dump() +
           "\n";
  }
  return out;
}

StudyExport ParseExport(std::string_view contents) {
  StudyExport e;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t declared = 0;
  for (const std::string& line : SplitString(contents, '\n')) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      const nlohmann::json j = nlohmann::json::parse(line);
      if (!header) {
        if (j.value("format", "") != kExportFormat) {
          throw ParseError("missing export header", line_no);
        }
        if (j.at("version").get<int>() != kExportVersion) {
          throw ParseError("unsupported export version", line_no);
        }
        declared = j.at("tasks").get<std::size_t>();
        header = true;
        continue;
      }
      ExportedTask t;
      t.task_id = j.at("taskId").get<int>();
      t.source_id = j.at("sourceId").get<std::string>();
      t.dataset = j.at("dataset").get<std::string>();
      t.original = j.at("original").get<std::string>();
      t.system_correction = j.at("systemCorrection").get<std::string>();
      t.human_correction = j.at("humanCorrection").get<std::string>();
      for (const auto& l : j.at("labels")) {
        t.labels.push_back({l.at("annotatorId").get<std::string>(),
                            metrics::ParsePreference(l.at("resolvedChoice").get<std::string>()),
                            l.at("timestamp").get<std::string>()});
      }
      e.tasks.push_back(std::move(t));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(ex.what(), line_no);
    } catch (const std::invalid_argument& ex) {
      throw ParseError(ex.what(), line_no);
    }
  }
  if (!header) throw ParseError("missing export header", 0);
  if (declared != e.tasks.size()) {
    throw ParseError("header declares " + std::to_string(declared) +
                         " tasks, found " + std::to_string(e.tasks.size()),
                     0);
  }
  return e;
}

std::vector<metrics::PreferenceRecord> ToPreferenceRecords(const StudyExport& e) {
  std::vector<metrics::PreferenceRecord> out;
  for (const auto& t : e.tasks) {
    for (const auto& l : t.labels) {
      out.push_back({std::to_string(t.task_id), l.annotator_id, l.resolved, t.dataset});
    }
  }
  return out;
}

// ------------------------------------------------------------ JSON

nlohmann::json ToJson(const AnnotationTask& t) {
  return {{"taskId", t.task_id},     {"sourceId", t.source_id},
          {"dataset", t.dataset},    {"original", t.original},
          {"optionA", t.option_a},   {"optionB", t.option_b},
          {"systemIsA", t.system_is_a}};
}

AnnotationTask TaskFromJson(const nlohmann::json& j) {
  AnnotationTask t;
  t.task_id = j.at("taskId").get<int>();
  t.source_id = j.at("sourceId").get<std::string>();
  t.dataset = j.at("dataset").get<std::string>();
  t.original = j.at("original").get<std::string>();
  t.option_a = j.at("optionA").get<std::string>();
  t.option_b = j.at("optionB").get<std::string>();
  t.system_is_a = j.at("systemIsA").get<bool>();
  return t;
}

nlohmann::json ToJson(const AnnotationLabel& l) {
  return {{"taskId", l.task_id},
          {"annotatorId", l.annotator_id},
          {"choice", ChoiceName(l.choice)},
          {"resolvedChoice", metrics::PreferenceName(l.resolved)},
          {"timestamp", l.timestamp}};
}

AnnotationLabel LabelFromJson(const nlohmann::json& j) {
  AnnotationLabel l;
  l.task_id = j.at("taskId").get<int>();
  l.annotator_id = j.at("annotatorId").get<std::string>();
  l.choice = ParseChoice(j.at("choice").get<std::string>());
  l.resolved = metrics::ParsePreference(j.at("resolvedChoice").get<std::string>());
  l.timestamp = j.at("timestamp").get<std::string>();
  return l;
}

// ------------------------------------------------------------ Study

namespace {

std::string StudyDocument(const std::vector<AnnotationTask>& tasks,
                          const StudyConfig& cfg) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : tasks) arr.push_back(ToJson(t));
  return nlohmann::json{{"config",
                         {{"tasksPerDataset", cfg.tasks_per_dataset},
                          {"annotatorsPerTask", cfg.annotators_per_task},
                          {"seed", cfg.seed}}},
                        {"tasks", arr}}
             .dump(2) +
         "\n";
}

}  // namespace

Study::Study(std::vector<AnnotationTask> tasks, StudyConfig cfg,
             std::optional<std::string> store_dir)
    : tasks_(std::move(tasks)),
      cfg_(cfg),
      store_dir_(std::move(store_dir)),
      clock_(UtcTimestamp) {
  cfg_.Validate();
  std::set<int> ids;
  for (const auto& t : tasks_) {
    if (t.option_a.empty() || t.option_b.empty()) {
      throw std::invalid_argument("task " + std::to_string(t.task_id) +
                                  " has an empty option");
    }
    if (!ids.insert(t.task_id).second) {
      throw std::invalid_argument("duplicate task id " + std::to_string(t.task_id));
    }
  }
  std::sort(tasks_.begin(), tasks_.end(),
            [](const AnnotationTask& a, const AnnotationTask& b) {
              return a.task_id < b.task_id;
            });
  if (!store_dir_) return;
  fs::create_directories(*store_dir_);
  const std::string doc = StudyDocument(tasks_, cfg_);
  const std::string path = *store_dir_ + "/study.json";
  if (fs::exists(path)) {
    if (ReadFile(path) != doc) {
      throw Conflict(*store_dir_ + " already holds a different study");
    }
  } else {
    WriteFile(path, doc);
  }
  // Replay persisted labels: snapshot first, then the log beyond it.
  std::size_t from_snapshot = 0;
  const std::string snap_path = *store_dir_ + "/snapshot.json";
  if (fs::exists(snap_path)) {
    const nlohmann::json snap = nlohmann::json::parse(ReadFile(snap_path));
    for (const auto& l : snap.at("labels")) labels_.push_back(LabelFromJson(l));
    from_snapshot = labels_.size();
  }
  const std::string log_path = *store_dir_ + "/labels.jsonl";
  if (fs::exists(log_path)) {
    const std::vector<std::string> lines = ReadLines(log_path);
    std::size_t good = 0;
    std::size_t seen = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (Trim(lines[i]).empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(lines[i]);
      } catch (const nlohmann::json::parse_error&) {
        if (i + 1 == lines.size()) break;  // torn final write
        throw ParseError(log_path + ": corrupt label record", i + 1);
      }
      good = i + 1;
      if (seen++ < from_snapshot) continue;
      labels_.push_back(LabelFromJson(j));
    }
    if (seen < from_snapshot) {
      throw Error(log_path + " is shorter than its snapshot");
    }
    if (good < lines.size()) {
      std::string kept;
      for (std::size_t i = 0; i < good; ++i) kept += lines[i] + "\n";
      WriteFile(log_path, kept);
    }
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    labels_by_task_[labels_[i].task_id].push_back(i);
  }
}

std::unique_ptr<Study> Study::Open(const std::string& store_dir) {
  const std::string path = store_dir + "/study.json";
  if (!fs::exists(path)) throw Error("no study found in " + store_dir);
  const nlohmann::json j = nlohmann::json::parse(ReadFile(path));
  StudyConfig cfg;
  cfg.tasks_per_dataset = j.at("config").at("tasksPerDataset").get<std::size_t>();
  cfg.annotators_per_task = j.at("config").at("annotatorsPerTask").get<std::size_t>();
  cfg.seed = j.at("config").at("seed").get<std::uint64_t>();
  std::vector<AnnotationTask> tasks;
  for (const auto& t : j.at("tasks")) tasks.push_back(TaskFromJson(t));
  return std::make_unique<Study>(std::move(tasks), cfg, store_dir);
}

const AnnotationTask* Study::FindTask(int task_id) const {
  auto it = std::lower_bound(tasks_.begin(), tasks_.end(), task_id,
                             [](const AnnotationTask& t, int id) { return t.task_id < id; });
  if (it == tasks_.end() || it->task_id != task_id) return nullptr;
  return &*it;
}

std::optional<TaskView> Study::NextTask(const std::string& annotator_id) const {
  std::shared_lock lock(mutex_);
  std::size_t done = 0;
  const AnnotationTask* next = nullptr;
  for (const AnnotationTask& t : tasks_) {
    const auto it = labels_by_task_.find(t.task_id);
    bool mine = false;
    std::size_t count = 0;
    if (it != labels_by_task_.end()) {
      count = it->second.size();
      for (std::size_t idx : it->second) {
        if (labels_[idx].annotator_id == annotator_id) mine = true;
      }
    }
    if (mine) {
      ++done;
    } else if (next == nullptr && count < cfg_.annotators_per_task) {
      next = &t;
    }
  }
  if (next == nullptr) return std::nullopt;
  TaskView v;
  v.task_id = next->task_id;
  v.original = next->original;
  v.option_a = next->option_a;
  v.option_b = next->option_b;
  v.instructions = Instructions();
  v.progress = {done, tasks_.size()};
  return v;
}

AnnotationLabel Study::SubmitLabel(const std::string& annotator_id, int task_id,
                                   Choice choice) {
  if (Trim(annotator_id).empty()) throw std::invalid_argument("annotator id is empty");
  std::unique_lock lock(mutex_);
  const AnnotationTask* task = FindTask(task_id);
  if (task == nullptr) throw NotFound("no task " + std::to_string(task_id));
  auto& existing = labels_by_task_[task_id];
  for (std::size_t idx : existing) {
    if (labels_[idx].annotator_id == annotator_id) {
      throw Conflict("annotator '" + annotator_id + "' already labeled task " +
                     std::to_string(task_id));
    }
  }
  if (existing.size() >= cfg_.annotators_per_task) {
    throw Conflict("task " + std::to_string(task_id) + " already has " +
                   std::to_string(existing.size()) + " labels");
  }
  AnnotationLabel label{task_id, annotator_id, choice, Resolve(*task, choice), clock_()};
  Persist(label);
  existing.push_back(labels_.size());
  labels_.push_back(label);
  if (store_dir_ && labels_.size() % snapshot_every_ == 0) WriteSnapshot();
  return label;
}

void Study::Persist(const AnnotationLabel& label) {
  if (!store_dir_) return;
  std::ofstream out(*store_dir_ + "/labels.jsonl", std::ios::app | std::ios::binary);
  out << ToJson(label).dump() << '\n';
  out.flush();
  if (!out) throw Error("cannot append to the label log in " + *store_dir_);
}

void Study::WriteSnapshot() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : labels_) arr.push_back(ToJson(l));
  const std::string path = *store_dir_ + "/snapshot.json";
  WriteFile(path + ".tmp", nlohmann::json{{"labels", arr}}.dump() + "\n");
  fs::rename(path + ".tmp", path);
}

std::size_t Study::label_count() const {
  std::shared_lock lock(mutex_);
  return labels_.size();
}

std::vector<AnnotationLabel> Study::Labels() const {
  std::shared_lock lock(mutex_);
  return labels_;
}

std::vector<metrics::PreferenceRecord> Study::Records() const {
  std::vector<metrics::PreferenceRecord> out;
  for (const auto& l : labels_) {
    const AnnotationTask* t = FindTask(l.task_id);
    out.push_back({std::to_string(l.task_id), l.annotator_id, l.resolved,
                   t == nullptr ? std::string() : t->dataset});
  }
  return out;
}

metrics::AgreementSummary Study::Stats() const {
  std::shared_lock lock(mutex_);
  return metrics::AgreementStats(Records());
}

nlohmann::json Study::StatsJson() const {
  const metrics::AgreementSummary s = Stats();
  nlohmann::json j = metrics::ToJson(s);
  j["tasks"] = task_count();
  j["labels"] = label_count();
  j["table"] = metrics::RenderPreferenceTable(s);
  return j;
}

StudyExport Study::Export() const {
  std::shared_lock lock(mutex_);
  StudyExport e;
  for (const AnnotationTask& t : tasks_) {
    ExportedTask x;
    x.task_id = t.task_id;
    x.source_id = t.source_id;
    x.dataset = t.dataset;
    x.original = t.original;
    x.system_correction = t.system_correction();
    x.human_correction = t.human_correction();
    const auto it = labels_by_task_.find(t.task_id);
    if (it != labels_by_task_.end()) {
      for (std::size_t idx : it->second) {
        const auto& l = labels_[idx];
        x.labels.push_back({l.annotator_id, l.resolved, l.timestamp});
      }
    }
    e.tasks.push_back(std::move(x));
  }
  return e;
}

void Study::ExportTo(const std::string& path) const {
  WriteFile(path, SerializeExport(Export()));
}

// ------------------------------------------------------------ server

namespace {

constexpr std::string_view kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\">"
    "<title>Annotation</title></head>\n<body><h1>Annotation service</h1>"
    "<p>The API is available under /api. Start the service with --ui-dir to "
    "serve the annotation interface.</p></body></html>\n";

void SendError(httplib::Response& res, int status, std::string_view code,
               const std::string& message) {
  res.status = status;
  res.set_content(nlohmann::json{{"code", code}, {"message", message}}.dump(),
                  "application/json");
}

template <typename Fn>
void Guard(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFound& e) {
    SendError(res, 404, "not_found", e.what());
  } catch (const Conflict& e) {
    SendError(res, 409, "conflict", e.what());
  } catch (const std::invalid_argument& e) {
    SendError(res, 400, "bad_request", e.what());
  } catch (const nlohmann::json::exception& e) {
    SendError(res, 400, "bad_request", e.what());
  } catch (const std::exception& e) {
    SendError(res, 500, "internal", e.what());
  }
}

std::string AnnotatorOf(const httplib::Request& req) {
  if (req.has_param("annotator")) return req.get_param_value("annotator");
  if (req.has_header("X-Annotator")) return req.get_header_value("X-Annotator");
  return std::string();
}

}  // namespace

AnnotationServer::AnnotationServer(Study& study, std::optional<std::string> ui_dir)
    : study_(study),
      ui_dir_(std::move(ui_dir)),
      server_(std::make_unique<httplib::Server>()) {
  Routes();
}

AnnotationServer::~AnnotationServer() { Stop(); }

void AnnotationServer::Routes() {
  server_->Get("/api/tasks/next", [this](const httplib::Request& req,
                                         httplib::Response& res) {
    Guard(res, [&] {
      const std::string annotator = AnnotatorOf(req);
      if (Trim(annotator).empty()) {
        throw std::invalid_argument("missing annotator parameter");
      }
      const auto view = study_.NextTask(annotator);
      nlohmann::json body;
      if (view) {
        body = {{"task", ToJson(*view)}, {"done", false}};
      } else {
        body = {{"task", nullptr}, {"done", true}};
      }
      res.set_content(body.dump(), "application/json");
    });
  });
  server_->Post(R"(/api/tasks/(-?\d+)/label)", [this](const httplib::Request& req,
                                                      httplib::Response& res) {
    Guard(res, [&] {
      const int task_id = std::stoi(req.matches[1].str());
      const nlohmann::json body = nlohmann::json::parse(req.body);
      std::string annotator = body.value("annotator", std::string());
      if (annotator.empty()) annotator = AnnotatorOf(req);
      if (!body.contains("choice") || !body["choice"].is_string()) {
        throw std::invalid_argument("missing choice");
      }
      const AnnotationLabel label = study_.SubmitLabel(
          annotator, task_id, ParseChoice(body["choice"].get<std::string>()));
      // The resolved choice would reveal the blinding, so it is not echoed.
      res.set_content(nlohmann::json{{"taskId", label.task_id},
                                     {"annotator", label.annotator_id},
                                     {"choice", ChoiceName(label.choice)},
                                     {"timestamp", label.timestamp}}
                          .dump(),
                      "application/json");
    });
  });
  server_->Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    Guard(res, [&] { res.set_content(study_.StatsJson().dump(), "application/json"); });
  });
  server_->Get("/api/export", [this](const httplib::Request&, httplib::Response& res) {
    Guard(res, [&] {
      res.set_content(SerializeExport(study_.Export()), "application/x-ndjson");
    });
  });
  server_->Get("/api/instructions", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"instructions", Instructions()}}.dump(),
                    "application/json");
  });
  if (ui_dir_ && server_->set_mount_point("/", *ui_dir_)) return;
  if (ui_dir_) Warn("UI directory not found: " + *ui_dir_);
  server_->Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(std::string(kPlaceholderPage), "text/html; charset=utf-8");
  });
}

int AnnotationServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void AnnotationServer::Run(const std::string& host, int port) {
  if (!server_->listen(host, port)) {
    throw Error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void AnnotationServer::Stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace perturbench::annotation
