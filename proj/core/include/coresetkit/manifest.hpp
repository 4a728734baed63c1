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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coresetkit/documents.hpp"
#include "coresetkit/embeddings.hpp"

// Declarative experiment plans: ordered training stages plus the test sets
// every resulting model is scored on.
namespace coresetkit::harness {

inline constexpr int kManifestSchemaVersion = 1;

struct Hyperparameters {
  std::string channel_mode = "grayscale";
  double learning_rate = 0.1;
  double weight_decay = 1e-4;
  int epochs = 500;
  int checkpoint_interval = 50;

  friend bool operator==(const Hyperparameters&,
                         const Hyperparameters&) = default;
};

enum class Init { kScratch, kPreviousStage };

struct TrainingStage {
  std::string domain;
  std::filesystem::path subset;  // patch listing (absolute in memory)
  Hyperparameters hyperparameters;
  Init init = Init::kScratch;

  friend bool operator==(const TrainingStage&, const TrainingStage&) = default;
};

struct Evaluation {
  std::string domain;
  std::filesystem::path testset;  // directory with images/ and masks/

  friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

struct TrainerCommand {
  std::string train;    // template; empty means "supplied at run time"
  std::string predict;

  friend bool operator==(const TrainerCommand&,
                         const TrainerCommand&) = default;
};

struct ExperimentManifest {
  std::string name;
  std::vector<TrainingStage> stages;
  std::vector<Evaluation> evaluations;
  std::uint64_t seed = 0;
  TrainerCommand trainer;

  // Throws InvalidArgument: no stages, a later stage not initialised from
  // its predecessor... see the .cpp for the full list.
  void Validate() const;

  friend bool operator==(const ExperimentManifest&,
                         const ExperimentManifest&) = default;
};

// Paths are written relative to `base_dir` (the manifest's directory) and
// resolved against it when read.
nlohmann::json ToJson(const ExperimentManifest& m,
                      const std::filesystem::path& base_dir);
ExperimentManifest ManifestFromJson(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir);

void WriteManifest(const ExperimentManifest& m,
                   const std::filesystem::path& path);
ExperimentManifest ReadManifest(const std::filesystem::path& path);

// Known domains with their full training listing and test set.
struct Domain {
  std::string name;
  std::filesystem::path train;
  std::filesystem::path testset;
};

struct DomainCatalog {
  std::vector<Domain> domains;

  const Domain& Find(const std::string& name) const;  // throws InvalidArgument
  bool Contains(const std::string& name) const;
};

// {"domains": [{"name", "train", "test"}]}, paths relative to the file.
DomainCatalog ReadCatalog(const std::filesystem::path& path);

// Returns the three default domains (Cyto, Histo, MultiInst) rooted at `root`:
// <root>/<name>/patches.json and <root>/<name>/test.
DomainCatalog StandardCatalog(const std::filesystem::path& root);

inline constexpr const char* kFullSubset = "full";

struct StageSpec {
  std::string domain;
  std::string subset = kFullSubset;  // "full" or a listing path
};

struct PlanOptions {
  std::string name;  // derived from the domain sequence when empty
  std::uint64_t seed = 0;
  Hyperparameters hyperparameters;
  TrainerCommand trainer;
};

// One stage per path entry, each after the first initialised from its
// predecessor. Evaluations cover every catalog domain (which always includes
// the stage and zero-shot domains). Unknown domains throw InvalidArgument.
ExperimentManifest PlanTransferPath(std::span<const StageSpec> path,
                                    std::span<const std::string> zero_shot,
                                    const DomainCatalog& catalog,
                                    const PlanOptions& options = {});

enum class PathPreset { kA, kB, kC };

// A: Cyto -> Histo -> MultiInst, B: Cyto -> MultiInst -> Histo,
// C: MultiInst -> Cyto -> Histo. All stages use the full training sets.
std::vector<StageSpec> PresetPath(PathPreset preset);
PathPreset ParsePreset(std::string_view text);

struct SweepSpec {
  std::string domain;
  DomainCatalog catalog;
  std::filesystem::path out_dir;  // where coreset files will be written
  PlanOptions options;
};

struct SweepEntry {
  double rate = 1.0;
  documents::CoresetDocument coreset;
  std::filesystem::path coreset_path;
  ExperimentManifest manifest;
};

// Bins the embeddings once, then samples one coreset and one single-stage
// manifest per rate. Throws InvalidArgument on an empty list or a rate
// outside (0, 1].
std::vector<SweepEntry> PlanRateSweep(std::span<const double> rates,
                                      const EmbeddingMatrix& m,
                                      std::size_t n_bins, std::uint64_t seed,
                                      const SweepSpec& spec);

// "rate-0.3", "rate-0.01" ... used for file and manifest names.
std::string RateTag(double rate);

}  // namespace coresetkit::harness
