// Copyright 2026 The CoresetKit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coresetkit/runner.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "coresetkit/documents.hpp"
#include "coresetkit/error.hpp"
#include "coresetkit/raster_io.hpp"

namespace coresetkit::harness {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kRunMarker = ".coresetkit-run";
constexpr std::array<const char*, 3> kPredictionExtensions = {".tif", ".tiff", ".png"};

bool IsPlaceholderName(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || c == '_';
  });
}

int RunShell(const std::string& command, const fs::path& log) {
  const std::string full = "( " + command + " ) > " + ShellQuote(log.string()) + " 2>&1";
  std::fflush(nullptr);
  const int status = std::system(full.c_str());
  if (status == -1) throw IoError("cannot launch shell for: " + command);
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
  return status;
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string StageDirName(std::size_t index, const std::string& domain) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "stage-%02zu-", index);
  return buf + domain;
}

void PrepareRunDirectory(const fs::path& dir) {
  if (fs::exists(dir)) {
    if (!fs::exists(dir / kRunMarker) && !fs::is_empty(dir)) {
      throw IoError(dir.string() + " exists and was not created by a previous run");
    }
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  documents::WriteTextAtomic(dir / kRunMarker, "");
}

std::string Rel(const fs::path& p, const fs::path& base) {
  if (p.empty()) return "";
  return p.lexically_relative(base).generic_string();
}

void Persist(const RunRecord& record) {
  documents::WriteJson(record.directory / "run_record.json",
                       ToJson(record, record.directory));
  documents::WriteJson(record.directory / "timings.json", TimingsJson(record));
}

}  // namespace

TrainerCommand TrainerFromBase(const std::string& base_command) {
  return {base_command + kDefaultTrainArgs, base_command + kDefaultPredictArgs};
}

std::string ShellQuote(const std::string& value) {
  std::string out = "'";
  for (char c : value) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

std::string Substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos);
      break;
    }
    const std::size_t close = tmpl.find('}', open);
    if (close == std::string::npos) {
      out.append(tmpl, pos);
      break;
    }
    const std::string_view name(tmpl.data() + open + 1, close - open - 1);
    out.append(tmpl, pos, open - pos);
    if (IsPlaceholderName(name)) {
      const auto it = values.find(std::string(name));
      if (it == values.end()) {
        throw InvalidArgument("unknown placeholder {" + std::string(name) +
                              "} in trainer command");
      }
      out += ShellQuote(it->second);
    } else {
      out.append(tmpl, open, close - open + 1);
    }
    pos = close + 1;
  }
  return out;
}

fs::path ResolveWorkdir(const std::optional<fs::path>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return fs::absolute(*explicit_dir);
  if (const char* env = std::getenv(kWorkdirEnv); env && *env) {
    return fs::absolute(env);
  }
  return fs::absolute(kDefaultWorkdir);
}

metrics::MetricsReport EvaluateDirectories(const fs::path& gt_dir,
                                           const fs::path& pred_dir) {
  if (!fs::is_directory(gt_dir)) throw IoError("no mask directory " + gt_dir.string());
  std::vector<fs::path> masks;
  for (const auto& entry : fs::directory_iterator(gt_dir)) {
    if (entry.is_regular_file() && IsRasterFile(entry.path())) {
      masks.push_back(entry.path());
    }
  }
  if (masks.empty()) throw IoError("no masks in " + gt_dir.string());
  std::sort(masks.begin(), masks.end());

  std::vector<metrics::NamedMetrics> rows;
  rows.reserve(masks.size());
  for (const auto& gt_path : masks) {
    const std::string stem = gt_path.stem().string();
    fs::path pred_path;
    for (const char* ext : kPredictionExtensions) {
      if (fs::exists(pred_dir / (stem + ext))) {
        pred_path = pred_dir / (stem + ext);
        break;
      }
    }
    if (pred_path.empty()) {
      throw IoError("missing prediction for '" + stem + "' in " + pred_dir.string());
    }
    const LabelMask gt = ReadMask(gt_path);
    const LabelMask pred = ReadMask(pred_path);
    try {
      rows.push_back({stem, metrics::PairwiseMetrics(gt, pred)});
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("'" + stem + "': " + e.what());
    }
  }
  return metrics::Aggregate(std::move(rows));
}

RunRecord Run(const ExperimentManifest& manifest, const RunOptions& options) {
  manifest.Validate();
  TrainerCommand trainer = manifest.trainer;
  if (!options.trainer.train.empty()) trainer.train = options.trainer.train;
  if (!options.trainer.predict.empty()) trainer.predict = options.trainer.predict;
  if (trainer.train.empty() || trainer.predict.empty()) {
    throw InvalidArgument("no trainer command given for manifest '" + manifest.name + "'");
  }
  for (const auto& stage : manifest.stages) {
    if (!fs::is_regular_file(stage.subset)) {
      throw IoError("subset listing " + stage.subset.string() + " does not exist");
    }
  }
  for (const auto& e : manifest.evaluations) {
    if (!fs::is_directory(e.testset / "images") || !fs::is_directory(e.testset / "masks")) {
      throw IoError("test set " + e.testset.string() + " needs images/ and masks/");
    }
  }

  const auto run_start = std::chrono::steady_clock::now();
  RunRecord record;
  record.manifest_name = manifest.name;
  record.directory = ResolveWorkdir(options.workdir) / manifest.name;
  PrepareRunDirectory(record.directory);

  fs::path previous_model;
  for (std::size_t k = 0; k < manifest.stages.size(); ++k) {
    const auto& stage = manifest.stages[k];
    const auto& h = stage.hyperparameters;
    const fs::path dir = record.directory / StageDirName(k + 1, stage.domain);
    fs::create_directories(dir);

    StageRecord sr;
    sr.index = k + 1;
    sr.domain = stage.domain;
    sr.model = dir / "model";
    sr.log = dir / "train.log";
    sr.command = Substitute(
        trainer.train,
        {{"subset", stage.subset.string()},
         {"init_model",
          stage.init == Init::kPreviousStage ? previous_model.string() : ""},
         {"out_model", sr.model.string()},
         {"lr", documents::FormatNumber(h.learning_rate)},
         {"wd", documents::FormatNumber(h.weight_decay)},
         {"epochs", std::to_string(h.epochs)},
         {"channel_mode", h.channel_mode},
         {"checkpoint_interval", std::to_string(h.checkpoint_interval)},
         {"domain", stage.domain},
         {"stage", std::to_string(k + 1)}});
    const auto start = std::chrono::steady_clock::now();
    sr.exit_status = RunShell(sr.command, sr.log);
    sr.seconds = SecondsSince(start);
    const bool ok = sr.exit_status == 0 && fs::exists(sr.model);
    record.stages.push_back(sr);
    if (!ok) {
      record.failed_stage = k + 1;
      record.failure = sr.exit_status != 0
                           ? "trainer exited with status " + std::to_string(sr.exit_status)
                           : "trainer did not write a model artifact";
      record.total_seconds = SecondsSince(run_start);
      Persist(record);
      return record;
    }
    previous_model = sr.model;
  }

  try {
    for (const auto& e : manifest.evaluations) {
      const fs::path pred_dir = record.directory / "predictions" / e.domain;
      fs::create_directories(pred_dir);
      const std::string command =
          Substitute(trainer.predict, {{"model", previous_model.string()},
                                       {"images", (e.testset / "images").string()},
                                       {"testset", e.testset.string()},
                                       {"pred_dir", pred_dir.string()},
                                       {"domain", e.domain}});
      const fs::path log = record.directory / "predictions" / (e.domain + ".log");
      if (const int status = RunShell(command, log); status != 0) {
        throw IoError("prediction for domain '" + e.domain + "' exited with status " +
                      std::to_string(status));
      }
      DomainEvaluation de;
      de.domain = e.domain;
      de.report = EvaluateDirectories(e.testset / "masks", pred_dir);
      de.report_json = record.directory / "reports" / (e.domain + ".json");
      de.report_csv = record.directory / "reports" / (e.domain + ".csv");
      documents::WriteJson(de.report_json, documents::ToJson(de.report));
      documents::WriteTextAtomic(de.report_csv, documents::ToCsv(de.report));
      record.evaluations.push_back(std::move(de));
    }
  } catch (const Error& e) {
    record.failure = e.what();
    record.total_seconds = SecondsSince(run_start);
    Persist(record);
    return record;
  }

  record.succeeded = true;
  record.total_seconds = SecondsSince(run_start);
  Persist(record);
  return record;
}

json ToJson(const RunRecord& record, const fs::path& base_dir) {
  json stages = json::array();
  for (const auto& s : record.stages) {
    stages.push_back({{"index", s.index},
                      {"domain", s.domain},
                      {"command", s.command},
                      {"exit_status", s.exit_status},
                      {"model", Rel(s.model, base_dir)},
                      {"log", Rel(s.log, base_dir)}});
  }
  json evaluations = json::array();
  for (const auto& e : record.evaluations) {
    json aggregate = json::object();
    for (std::size_t k = 0; k < metrics::kMetricNames.size(); ++k) {
      aggregate[std::string(metrics::kMetricNames[k])] = {
          {"mean", e.report.aggregate[k].mean}, {"std", e.report.aggregate[k].std}};
    }
    evaluations.push_back({{"domain", e.domain},
                           {"report", Rel(e.report_json, base_dir)},
                           {"csv", Rel(e.report_csv, base_dir)},
                           {"aggregate", std::move(aggregate)}});
  }
  return {{"kind", "run_record"},
          {"manifest", record.manifest_name},
          {"status", record.succeeded ? "succeeded" : "failed"},
          {"failed_stage", record.failed_stage ? json(*record.failed_stage) : json(nullptr)},
          {"failure", record.failure},
          {"stages", std::move(stages)},
          {"evaluations", std::move(evaluations)},
          {"timings", "timings.json"}};
}

json TimingsJson(const RunRecord& record) {
  json stages = json::array();
  for (const auto& s : record.stages) {
    stages.push_back({{"index", s.index}, {"seconds", s.seconds}});
  }
  return {{"kind", "run_timings"},
          {"manifest", record.manifest_name},
          {"stages", std::move(stages)},
          {"total_seconds", record.total_seconds}};
}

}  // namespace coresetkit::harness
