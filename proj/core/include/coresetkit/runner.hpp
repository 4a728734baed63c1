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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coresetkit/manifest.hpp"
#include "coresetkit/metrics.hpp"

namespace coresetkit::harness {

// Environment variable that overrides the default output root.
inline constexpr const char* kWorkdirEnv = "CORESETKIT_WORKDIR";
inline constexpr const char* kDefaultWorkdir = "coresetkit-runs";

// Training invocation appended to a bare trainer command.
inline constexpr const char* kDefaultTrainArgs =
    " --subset {subset} --init {init_model} --out {out_model} --lr {lr}"
    " --wd {wd} --epochs {epochs} --channel {channel_mode}"
    " --checkpoint-every {checkpoint_interval}";
// Prediction invocation appended to a bare trainer command.
inline constexpr const char* kDefaultPredictArgs =
    " --predict --model {model} --images {images} --out {pred_dir}";

// Builds train/predict templates from a bare executable prefix.
TrainerCommand TrainerFromBase(const std::string& base_command);

// Replaces {name} placeholders with shell-quoted values. Unknown
// placeholders throw InvalidArgument.
std::string Substitute(const std::string& tmpl,
                       const std::map<std::string, std::string>& values);

std::string ShellQuote(const std::string& value);

// Resolution order: explicit argument, CORESETKIT_WORKDIR, kDefaultWorkdir.
std::filesystem::path ResolveWorkdir(
    const std::optional<std::filesystem::path>& explicit_dir);

struct StageRecord {
  std::size_t index = 0;  // 1-based
  std::string domain;
  std::string command;
  int exit_status = 0;
  std::filesystem::path model;
  std::filesystem::path log;
  double seconds = 0.0;
};

struct DomainEvaluation {
  std::string domain;
  metrics::MetricsReport report;
  std::filesystem::path report_json;
  std::filesystem::path report_csv;
};

struct RunRecord {
  std::string manifest_name;
  bool succeeded = false;
  std::optional<std::size_t> failed_stage;  // 1-based
  std::string failure;
  std::vector<StageRecord> stages;
  std::vector<DomainEvaluation> evaluations;
  double total_seconds = 0.0;
  std::filesystem::path directory;
};

struct RunOptions {
  std::optional<std::filesystem::path> workdir;
  // Overrides the manifest's trainer templates when non-empty.
  TrainerCommand trainer;
};

// Executes the stages in order, stopping at the first failure, then asks the
// trainer for predictions on every evaluation test set and scores them.
// Writes <workdir>/<manifest name>/run_record.json (timings go to the sibling
// timings.json so the record itself is reproducible byte for byte).
RunRecord Run(const ExperimentManifest& manifest, const RunOptions& options);

// Scores every mask in gt_dir against the same-named file in pred_dir.
// Missing predictions throw IoError; shape mismatches InvalidArgument.
metrics::MetricsReport EvaluateDirectories(const std::filesystem::path& gt_dir,
                                           const std::filesystem::path& pred_dir);

nlohmann::json ToJson(const RunRecord& record,
                      const std::filesystem::path& base_dir);
nlohmann::json TimingsJson(const RunRecord& record);

}  // namespace coresetkit::harness
