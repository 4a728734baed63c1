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

#include "coresetkit/manifest.hpp"

#include <set>

#include "coresetkit/dq.hpp"
#include "coresetkit/error.hpp"

namespace coresetkit::harness {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path Normalized(const fs::path& p) {
  return fs::weakly_canonical(fs::absolute(p));
}

std::string RelativeTo(const fs::path& path, const fs::path& base) {
  const fs::path rel = Normalized(path).lexically_relative(Normalized(base));
  return rel.empty() ? Normalized(path).generic_string() : rel.generic_string();
}

fs::path Resolve(const std::string& text, const fs::path& base) {
  const fs::path p(text);
  return p.is_absolute() ? p.lexically_normal() : (base / p).lexically_normal();
}

const char* InitName(Init init) {
  return init == Init::kScratch ? "scratch" : "previous_stage";
}

Init ParseInit(const std::string& text) {
  if (text == "scratch") return Init::kScratch;
  if (text == "previous_stage") return Init::kPreviousStage;
  throw FormatError("unknown stage init '" + text + "'");
}

std::string JoinDomains(std::span<const StageSpec> path) {
  std::string name;
  for (const auto& stage : path) {
    if (!name.empty()) name += "-";
    name += stage.domain;
  }
  return name;
}

std::vector<Evaluation> AllEvaluations(const DomainCatalog& catalog) {
  std::vector<Evaluation> out;
  for (const auto& d : catalog.domains) out.push_back({d.name, d.testset});
  return out;
}

}  // namespace

void ExperimentManifest::Validate() const {
  if (name.empty()) throw InvalidArgument("manifest needs a name");
  if (stages.empty()) throw InvalidArgument("manifest '" + name + "' has no stages");
  std::set<std::string> evaluated;
  for (const auto& e : evaluations) {
    if (e.domain.empty()) throw InvalidArgument("evaluation without a domain");
    if (!evaluated.insert(e.domain).second) {
      throw InvalidArgument("domain '" + e.domain + "' evaluated twice");
    }
  }
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const auto& s = stages[k];
    const std::string where = "stage " + std::to_string(k + 1);
    if (s.domain.empty()) throw InvalidArgument(where + " has no domain");
    if (s.subset.empty()) throw InvalidArgument(where + " has no subset listing");
    if (k == 0 && s.init != Init::kScratch) {
      throw InvalidArgument("the first stage cannot start from a previous stage");
    }
    if (k > 0 && s.init != Init::kPreviousStage) {
      throw InvalidArgument(where + " must initialise from the previous stage");
    }
    const auto& h = s.hyperparameters;
    if (!(h.learning_rate > 0.0) || !(h.weight_decay >= 0.0) || h.epochs < 1 ||
        h.checkpoint_interval < 1 || h.channel_mode.empty()) {
      throw InvalidArgument(where + " has invalid hyperparameters");
    }
    if (!evaluated.contains(s.domain)) {
      throw InvalidArgument(where + " trains on '" + s.domain +
                            "' but no evaluation covers it");
    }
  }
}

json ToJson(const ExperimentManifest& m, const fs::path& base_dir) {
  json stages = json::array();
  for (const auto& s : m.stages) {
    const auto& h = s.hyperparameters;
    stages.push_back({{"domain", s.domain},
                      {"subset", RelativeTo(s.subset, base_dir)},
                      {"init", InitName(s.init)},
                      {"hyperparameters",
                       {{"channel_mode", h.channel_mode},
                        {"learning_rate", h.learning_rate},
                        {"weight_decay", h.weight_decay},
                        {"epochs", h.epochs},
                        {"checkpoint_interval", h.checkpoint_interval}}}});
  }
  json evaluations = json::array();
  for (const auto& e : m.evaluations) {
    evaluations.push_back(
        {{"domain", e.domain}, {"testset", RelativeTo(e.testset, base_dir)}});
  }
  return {{"kind", "experiment_manifest"},
          {"schema_version", kManifestSchemaVersion},
          {"name", m.name},
          {"seed", m.seed},
          {"stages", std::move(stages)},
          {"evaluations", std::move(evaluations)},
          {"trainer", {{"train", m.trainer.train}, {"predict", m.trainer.predict}}}};
}

ExperimentManifest ManifestFromJson(const json& j, const fs::path& base_dir) {
  if (!j.is_object() || j.value("kind", "") != "experiment_manifest") {
    throw FormatError("not an experiment manifest");
  }
  if (j.value("schema_version", 0) != kManifestSchemaVersion) {
    throw FormatError("unsupported manifest schema version");
  }
  ExperimentManifest m;
  try {
    m.name = j.at("name").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& s : j.at("stages")) {
      TrainingStage stage;
      stage.domain = s.at("domain").get<std::string>();
      stage.subset = Resolve(s.at("subset").get<std::string>(), base_dir);
      stage.init = ParseInit(s.at("init").get<std::string>());
      const auto& h = s.at("hyperparameters");
      stage.hyperparameters.channel_mode = h.at("channel_mode").get<std::string>();
      stage.hyperparameters.learning_rate = h.at("learning_rate").get<double>();
      stage.hyperparameters.weight_decay = h.at("weight_decay").get<double>();
      stage.hyperparameters.epochs = h.at("epochs").get<int>();
      stage.hyperparameters.checkpoint_interval =
          h.at("checkpoint_interval").get<int>();
      m.stages.push_back(std::move(stage));
    }
    for (const auto& e : j.at("evaluations")) {
      m.evaluations.push_back({e.at("domain").get<std::string>(),
                               Resolve(e.at("testset").get<std::string>(), base_dir)});
    }
    if (j.contains("trainer")) {
      m.trainer.train = j["trainer"].value("train", "");
      m.trainer.predict = j["trainer"].value("predict", "");
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
  try {
    m.Validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(e.what());
  }
  return m;
}

void WriteManifest(const ExperimentManifest& m, const fs::path& path) {
  m.Validate();
  const fs::path base = fs::absolute(path).parent_path();
  documents::WriteJson(path, ToJson(m, base));
}

ExperimentManifest ReadManifest(const fs::path& path) {
  return ManifestFromJson(documents::ReadJson(path),
                          fs::absolute(path).parent_path());
}

const Domain& DomainCatalog::Find(const std::string& name) const {
  for (const auto& d : domains) {
    if (d.name == name) return d;
  }
  throw InvalidArgument("unknown domain '" + name + "'");
}

bool DomainCatalog::Contains(const std::string& name) const {
  for (const auto& d : domains) {
    if (d.name == name) return true;
  }
  return false;
}

DomainCatalog ReadCatalog(const fs::path& path) {
  const json j = documents::ReadJson(path);
  const fs::path base = fs::absolute(path).parent_path();
  DomainCatalog catalog;
  try {
    for (const auto& d : j.at("domains")) {
      catalog.domains.push_back({d.at("name").get<std::string>(),
                                 Resolve(d.at("train").get<std::string>(), base),
                                 Resolve(d.at("test").get<std::string>(), base)});
    }
  } catch (const json::exception& e) {
    throw FormatError("malformed domain catalog " + path.string() + ": " + e.what());
  }
  std::set<std::string> names;
  for (const auto& d : catalog.domains) {
    if (!names.insert(d.name).second) {
      throw FormatError("domain '" + d.name + "' listed twice in " + path.string());
    }
  }
  return catalog;
}

DomainCatalog StandardCatalog(const fs::path& root) {
  DomainCatalog catalog;
  for (const char* name : {"Cyto", "Histo", "MultiInst"}) {
    catalog.domains.push_back({name, root / name / "patches.json", root / name / "test"});
  }
  return catalog;
}

ExperimentManifest PlanTransferPath(std::span<const StageSpec> path,
                                    std::span<const std::string> zero_shot,
                                    const DomainCatalog& catalog,
                                    const PlanOptions& options) {
  if (path.empty()) throw InvalidArgument("transfer path has no stages");
  for (const auto& d : zero_shot) catalog.Find(d);

  ExperimentManifest m;
  m.name = options.name.empty() ? JoinDomains(path) : options.name;
  m.seed = options.seed;
  m.trainer = options.trainer;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const Domain& domain = catalog.Find(path[k].domain);
    TrainingStage stage;
    stage.domain = domain.name;
    stage.subset = path[k].subset == kFullSubset
                       ? domain.train
                       : fs::absolute(path[k].subset).lexically_normal();
    stage.hyperparameters = options.hyperparameters;
    stage.init = k == 0 ? Init::kScratch : Init::kPreviousStage;
    m.stages.push_back(std::move(stage));
  }
  m.evaluations = AllEvaluations(catalog);
  m.Validate();
  return m;
}

std::vector<StageSpec> PresetPath(PathPreset preset) {
  switch (preset) {
    case PathPreset::kA:
      return {{"Cyto"}, {"Histo"}, {"MultiInst"}};
    case PathPreset::kB:
      return {{"Cyto"}, {"MultiInst"}, {"Histo"}};
    case PathPreset::kC:
      return {{"MultiInst"}, {"Cyto"}, {"Histo"}};
  }
  throw InvalidArgument("unknown path preset");
}

PathPreset ParsePreset(std::string_view text) {
  if (text == "A" || text == "a") return PathPreset::kA;
  if (text == "B" || text == "b") return PathPreset::kB;
  if (text == "C" || text == "c") return PathPreset::kC;
  throw InvalidArgument("unknown path preset '" + std::string(text) + "'");
}

std::string RateTag(double rate) { return "rate-" + documents::FormatNumber(rate); }

std::vector<SweepEntry> PlanRateSweep(std::span<const double> rates,
                                      const EmbeddingMatrix& m,
                                      std::size_t n_bins, std::uint64_t seed,
                                      const SweepSpec& spec) {
  if (rates.empty()) throw InvalidArgument("rate sweep needs at least one rate");
  for (double r : rates) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw InvalidArgument("sweep rate " + documents::FormatNumber(r) +
                            " outside (0, 1]");
    }
  }
  const Domain& domain = spec.catalog.Find(spec.domain);
  const dq::BinPartition bins = dq::FormBins(m, n_bins);

  std::vector<SweepEntry> out;
  for (double rate : rates) {
    SweepEntry entry;
    entry.rate = rate;
    entry.coreset =
        documents::MakeCoresetDocument(m, bins, dq::SampleCoreset(bins, rate, seed));
    entry.coreset_path = fs::absolute(spec.out_dir / ("coreset_" + RateTag(rate) + ".json"))
                             .lexically_normal();
    ExperimentManifest& manifest = entry.manifest;
    manifest.name = spec.options.name.empty() ? domain.name + "-dq-" + RateTag(rate)
                                              : spec.options.name + "-" + RateTag(rate);
    manifest.seed = seed;
    manifest.trainer = spec.options.trainer;
    manifest.stages.push_back(
        {domain.name, entry.coreset_path, spec.options.hyperparameters, Init::kScratch});
    manifest.evaluations = AllEvaluations(spec.catalog);
    manifest.Validate();
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace coresetkit::harness
