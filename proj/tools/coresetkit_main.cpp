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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "coresetkit/diversity.hpp"
#include "coresetkit/documents.hpp"
#include "coresetkit/dq.hpp"
#include "coresetkit/embeddings.hpp"
#include "coresetkit/error.hpp"
#include "coresetkit/manifest.hpp"
#include "coresetkit/patching.hpp"
#include "coresetkit/raster_io.hpp"
#include "coresetkit/replay.hpp"
#include "coresetkit/runner.hpp"

namespace fs = std::filesystem;
namespace ck = coresetkit;
namespace docs = coresetkit::documents;

namespace {

// Files in `dir` with a raster extension, sorted by name.
std::vector<fs::path> RasterFiles(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ck::IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && ck::IsRasterFile(e.path())) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, fs::path> ByStem(const std::vector<fs::path>& files) {
  std::map<std::string, fs::path> out;
  for (const auto& f : files) {
    const auto [it, inserted] = out.emplace(f.stem().string(), f);
    if (!inserted) {
      throw ck::InvalidArgument("two files share the stem '" + it->first + "'");
    }
  }
  return out;
}

std::vector<std::string> SplitList(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ck::harness::DomainCatalog LoadCatalog(const std::string& catalog,
                                       const std::string& data_root) {
  if (!catalog.empty()) return ck::harness::ReadCatalog(catalog);
  if (!data_root.empty()) return ck::harness::StandardCatalog(fs::absolute(data_root));
  throw ck::InvalidArgument("one of --catalog or --data-root is required");
}

ck::harness::TrainerCommand TrainerFromFlags(const std::string& base,
                                             const std::string& train,
                                             const std::string& predict) {
  ck::harness::TrainerCommand cmd;
  if (!base.empty()) cmd = ck::harness::TrainerFromBase(base);
  if (!train.empty()) cmd.train = train;
  if (!predict.empty()) cmd.predict = predict;
  return cmd;
}

// --- quantize ---------------------------------------------------------------

struct QuantizeArgs {
  std::string embeddings;
  std::size_t bins = ck::dq::kDefaultBins;
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::string method = "dq";
  unsigned threads = 0;
  std::string out;
};

int Quantize(const QuantizeArgs& a) {
  const auto m = ck::ReadEmbeddings(a.embeddings);
  docs::CoresetDocument doc;
  if (a.method == "random") {
    const auto sel = ck::dq::RandomBaseline(m.rows(), a.rate, a.seed);
    doc.method = "random";
    doc.rate = a.rate;
    doc.seed = a.seed;
    doc.bins.push_back(m.ids());
    for (std::size_t i : sel.selected) doc.selection.push_back(m.id(i));
  } else {
    ck::dq::BinOptions options;
    options.threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
    const auto bins = ck::dq::FormBins(m, a.bins, options);
    const auto sel = ck::dq::SampleCoreset(bins, a.rate, a.seed);
    doc = docs::MakeCoresetDocument(m, bins, sel);
  }
  docs::WriteJson(a.out, docs::ToJson(doc));
  std::cout << "selected " << doc.selection.size() << " of " << m.rows()
            << " patches -> " << a.out << "\n";
  return 0;
}

// --- patch ------------------------------------------------------------------

struct PatchArgs {
  std::string images;
  std::string masks;
  std::string out;
  std::size_t window = ck::patching::kDefaultWindow;
  std::size_t stride = ck::patching::kDefaultStride;
  bool keep_channels = false;
};

int Patch(const PatchArgs& a) {
  const auto images = RasterFiles(a.images);
  const auto masks = ByStem(RasterFiles(a.masks));
  const fs::path out(a.out);
  fs::create_directories(out / "images");
  fs::create_directories(out / "masks");

  docs::PatchLedger ledger;
  ledger.window = a.window;
  ledger.stride = a.stride;
  ledger.image_dir = "images";
  ledger.mask_dir = "masks";
  for (const auto& path : images) {
    const std::string name = path.stem().string();
    const auto mask = masks.find(name);
    if (mask == masks.end()) throw ck::IoError("no mask for image " + path.string());
    ck::patching::LabeledImage img{name, ck::ReadImage(path), ck::ReadMask(mask->second)};
    if (!a.keep_channels) img.image = ck::patching::ToGrayscale(img.image);
    for (const auto& p : ck::patching::ExtractPatches(img, a.window, a.stride).patches) {
      const std::string id = p.id.ToString();
      docs::LedgerEntry entry{id, id + ".png", id + ".tif"};
      ck::WriteImage(p.image, out / "images" / entry.image);
      ck::WriteMask(p.mask, out / "masks" / entry.mask);
      ledger.entries.push_back(std::move(entry));
    }
  }
  docs::WriteJson(out / "patches.json", docs::ToJson(ledger));
  std::cout << ledger.entries.size() << " patches from " << images.size()
            << " images -> " << (out / "patches.json").string() << "\n";
  return 0;
}

// --- evaluate ---------------------------------------------------------------

int Evaluate(const std::string& gt, const std::string& pred, const std::string& out) {
  const auto report = ck::harness::EvaluateDirectories(gt, pred);
  const fs::path path(out);
  if (path.extension() == ".csv") {
    docs::WriteTextAtomic(path, docs::ToCsv(report));
  } else {
    docs::WriteJson(path, docs::ToJson(report));
  }
  for (std::size_t k = 0; k < ck::metrics::kMetricNames.size(); ++k) {
    std::cout << ck::metrics::kMetricNames[k] << " "
              << docs::FormatNumber(report.aggregate[k].mean) << " +- "
              << docs::FormatNumber(report.aggregate[k].std) << "\n";
  }
  return 0;
}

// --- compose-replay ---------------------------------------------------------

int ComposeReplay(const std::string& source, const std::string& target,
                  const std::string& out) {
  std::optional<ck::replay::SourceSubset> subset;
  if (!source.empty()) {
    const auto j = docs::ReadJson(source);
    ck::replay::SourceSubset s;
    s.provenance = fs::path(source).filename().string();
    if (j.value("kind", "") == "coreset") {
      const auto doc = docs::CoresetFromJson(j);
      s.rate = doc.rate;
      s.patches = doc.selection;
    } else {
      s.rate = 1.0;
      s.patches = docs::PatchListingFromJson(j);
    }
    subset = std::move(s);
  }
  const auto mix = ck::replay::ComposeReplay(subset, docs::ReadPatchListing(target));
  docs::WriteJson(out, docs::ToJson(mix));
  std::cout << mix.source_patches.size() << " source + " << mix.target_patches.size()
            << " target patches -> " << out << "\n";
  return 0;
}

// --- plan-transfer ----------------------------------------------------------

struct PlanArgs {
  std::string catalog;
  std::string data_root;
  std::string name;
  std::uint64_t seed = 0;
  std::string trainer_cmd;
  std::string train_template;
  std::string predict_template;
};

int PlanTransfer(const PlanArgs& a, const std::string& preset,
                 const std::string& path_text, const std::string& zero_shot_text,
                 const std::string& out) {
  std::vector<ck::harness::StageSpec> path;
  if (!preset.empty()) {
    path = ck::harness::PresetPath(ck::harness::ParsePreset(preset));
  } else {
    for (const auto& item : SplitList(path_text, ',')) {
      const auto colon = item.find(':');
      ck::harness::StageSpec spec;
      spec.domain = item.substr(0, colon);
      if (colon != std::string::npos) {
        const std::string subset = item.substr(colon + 1);
        spec.subset = subset == ck::harness::kFullSubset
                          ? subset
                          : fs::absolute(subset).string();
      }
      path.push_back(std::move(spec));
    }
  }
  const auto zero_shot = SplitList(zero_shot_text, ',');
  ck::harness::PlanOptions options;
  options.name = a.name;
  options.seed = a.seed;
  options.trainer = TrainerFromFlags(a.trainer_cmd, a.train_template, a.predict_template);
  const auto manifest = ck::harness::PlanTransferPath(
      path, zero_shot, LoadCatalog(a.catalog, a.data_root), options);
  ck::harness::WriteManifest(manifest, fs::absolute(out));
  std::cout << manifest.name << ": " << manifest.stages.size() << " stages, "
            << manifest.evaluations.size() << " evaluations -> " << out << "\n";
  return 0;
}

// --- plan-sweep -------------------------------------------------------------

int PlanSweep(const PlanArgs& a, const std::string& embeddings,
              const std::string& domain, const std::string& rates_text,
              std::size_t bins, const std::string& out_dir) {
  std::vector<double> rates;
  for (const auto& r : SplitList(rates_text, ',')) rates.push_back(std::stod(r));
  const auto m = ck::ReadEmbeddings(embeddings);
  ck::harness::SweepSpec spec;
  spec.domain = domain;
  spec.catalog = LoadCatalog(a.catalog, a.data_root);
  spec.out_dir = fs::absolute(out_dir);
  spec.options.name = a.name;
  spec.options.seed = a.seed;
  spec.options.trainer = TrainerFromFlags(a.trainer_cmd, a.train_template, a.predict_template);
  fs::create_directories(spec.out_dir);
  const auto entries = ck::harness::PlanRateSweep(rates, m, bins, a.seed, spec);
  for (const auto& e : entries) {
    docs::WriteJson(e.coreset_path, docs::ToJson(e.coreset));
    const fs::path manifest_path = spec.out_dir / (e.manifest.name + ".json");
    ck::harness::WriteManifest(e.manifest, manifest_path);
    std::cout << ck::harness::RateTag(e.rate) << ": " << e.coreset.selection.size()
              << " patches -> " << manifest_path.string() << "\n";
  }
  return 0;
}

// --- run --------------------------------------------------------------------

int Run(const std::string& manifest_path, const PlanArgs& a, const std::string& workdir) {
  const auto manifest = ck::harness::ReadManifest(manifest_path);
  ck::harness::RunOptions options;
  if (!workdir.empty()) options.workdir = fs::path(workdir);
  options.trainer = TrainerFromFlags(a.trainer_cmd, a.train_template, a.predict_template);
  const auto record = ck::harness::Run(manifest, options);
  for (const auto& s : record.stages) {
    std::cout << "stage " << s.index << " " << s.domain << ": exit " << s.exit_status << "\n";
  }
  for (const auto& e : record.evaluations) {
    std::cout << e.domain;
    for (std::size_t k = 0; k < ck::metrics::kMetricNames.size(); ++k) {
      std::cout << " " << ck::metrics::kMetricNames[k] << "="
                << docs::FormatNumber(e.report.aggregate[k].mean);
    }
    std::cout << "\n";
  }
  std::cout << (record.succeeded ? "succeeded" : "failed: " + record.failure) << " -> "
            << (record.directory / "run_record.json").string() << "\n";
  return record.succeeded ? 0 : 1;
}

// --- analyze-diversity ------------------------------------------------------

int AnalyzeDiversity(const std::string& embeddings, const std::string& selection,
                     const std::string& bins_path, const std::string& out,
                     const std::string& plot) {
  const auto m = ck::ReadEmbeddings(embeddings);
  const auto doc = docs::CoresetFromJson(docs::ReadJson(selection));
  auto bin_ids = doc.bins;
  if (!bins_path.empty()) {
    const auto j = docs::ReadJson(bins_path);
    try {
      bin_ids = j.at("bins").get<std::vector<std::vector<std::string>>>();
    } catch (const nlohmann::json::exception& e) {
      throw ck::FormatError(bins_path + ": no bins array: " + e.what());
    }
  }
  const auto bins = docs::BinsByIndex(m, bin_ids);
  const auto sel = docs::SelectionByIndex(m, doc, bins);
  const auto stats = ck::diversity::Coverage(m, sel, bins);
  docs::WriteJson(out, {{"kind", "coverage"},
                        {"n", m.rows()},
                        {"selected", sel.selected.size()},
                        {"n_bins", bins.bins.size()},
                        {"mean_nn_distance", stats.mean_nn_distance},
                        {"max_nn_distance", stats.max_nn_distance},
                        {"mean_pairwise_selected", stats.mean_pairwise_selected},
                        {"bin_occupancy", stats.bin_occupancy}});
  if (!plot.empty()) {
    const auto proj = ck::diversity::Project2d(m);
    std::vector<char> selected(m.rows(), 0);
    for (std::size_t i : sel.selected) selected[i] = 1;
    std::vector<long> bin_of(m.rows(), -1);
    for (std::size_t b = 0; b < bins.bins.size(); ++b) {
      for (std::size_t i : bins.bins[b]) bin_of[i] = static_cast<long>(b);
    }
    std::string csv = "id,x,y,selected_flag,bin\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      csv += m.id(i) + "," + docs::FormatNumber(proj.x[i]) + "," +
             docs::FormatNumber(proj.y[i]) + "," + (selected[i] ? "1" : "0") + "," +
             std::to_string(bin_of[i]) + "\n";
    }
    docs::WriteTextAtomic(plot, csv);
    if (proj.zero_variance) std::cerr << "warning: embeddings have zero variance\n";
  }
  std::cout << "covering radius " << docs::FormatNumber(stats.max_nn_distance)
            << ", mean nn " << docs::FormatNumber(stats.mean_nn_distance)
            << ", bin occupancy " << docs::FormatNumber(stats.bin_occupancy) << "\n";
  return 0;
}

void AddPlanFlags(CLI::App* cmd, PlanArgs& a) {
  cmd->add_option("--catalog", a.catalog, "Domain catalog JSON");
  cmd->add_option("--data-root", a.data_root,
                  "Root holding <Domain>/patches.json and <Domain>/test");
  cmd->add_option("--name", a.name, "Manifest name");
  cmd->add_option("--seed", a.seed, "Experiment seed");
  cmd->add_option("--trainer-cmd", a.trainer_cmd, "Trainer executable prefix");
  cmd->add_option("--train-template", a.train_template, "Full training command template");
  cmd->add_option("--predict-template", a.predict_template,
                  "Full prediction command template");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coreset selection, patching, evaluation and experiment planning"};
  app.require_subcommand(1);

  QuantizeArgs q;
  auto* quantize = app.add_subcommand("quantize", "Select a coreset from an embedding file");
  quantize->add_option("--embeddings", q.embeddings, "Input .emb file")->required();
  quantize->add_option("--bins", q.bins, "Number of bins")->check(CLI::PositiveNumber);
  quantize->add_option("--rate", q.rate, "Sampling rate in (0, 1]")->required();
  quantize->add_option("--seed", q.seed, "Sampling seed");
  quantize->add_option("--method", q.method, "dq or random")
      ->check(CLI::IsMember({"dq", "random"}));
  quantize->add_option("--threads", q.threads, "Worker threads (0 = hardware)");
  quantize->add_option("--out", q.out, "Output coreset.json")->required();

  PatchArgs p;
  auto* patch = app.add_subcommand("patch", "Cut images and masks into sliding-window patches");
  patch->add_option("--images", p.images, "Image directory")->required();
  patch->add_option("--masks", p.masks, "Mask directory (matched by file stem)")->required();
  patch->add_option("--out", p.out, "Output directory")->required();
  patch->add_option("--window", p.window, "Window size in pixels");
  patch->add_option("--stride", p.stride, "Stride in pixels");
  patch->add_flag("--keep-channels", p.keep_channels, "Do not reduce images to grayscale");

  std::string gt, pred, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "Score predicted masks against ground truth");
  evaluate->add_option("--gt", gt, "Ground-truth mask directory")->required();
  evaluate->add_option("--pred", pred, "Prediction directory")->required();
  evaluate->add_option("--out", eval_out, "report.json or report.csv")->required();

  std::string source, target, mix_out;
  auto* compose = app.add_subcommand("compose-replay", "Mix a source subset with a target set");
  compose->add_option("--source", source, "Source coreset or listing (omit for target only)");
  compose->add_option("--target", target, "Target patch listing")->required();
  compose->add_option("--out", mix_out, "Output mix.json")->required();

  PlanArgs transfer_args;
  std::string preset, path_text, zero_shot, transfer_out;
  auto* transfer = app.add_subcommand("plan-transfer", "Write a multi-stage transfer manifest");
  auto* preset_opt = transfer->add_option("--preset", preset, "A, B or C");
  transfer->add_option("--path", path_text, "Domain[:listing],... (listing defaults to full)")
      ->excludes(preset_opt);
  transfer->add_option("--zero-shot", zero_shot, "Extra evaluation domains, comma separated");
  transfer->add_option("--out", transfer_out, "Output manifest")->required();
  AddPlanFlags(transfer, transfer_args);

  PlanArgs sweep_args;
  std::string sweep_emb, sweep_domain, rates, sweep_out;
  std::size_t sweep_bins = ck::dq::kDefaultBins;
  auto* sweep = app.add_subcommand("plan-sweep", "Write one coreset and manifest per rate");
  sweep->add_option("--embeddings", sweep_emb, "Embeddings of the domain's patches")->required();
  sweep->add_option("--domain", sweep_domain, "Training domain")->required();
  sweep->add_option("--rates", rates, "Comma-separated rates in (0, 1]")->required();
  sweep->add_option("--bins", sweep_bins, "Number of bins")->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", sweep_out, "Output directory")->required();
  AddPlanFlags(sweep, sweep_args);

  PlanArgs run_args;
  std::string manifest, workdir;
  auto* run = app.add_subcommand("run", "Execute a manifest with an external trainer");
  run->add_option("--manifest", manifest, "Manifest JSON")->required();
  run->add_option("--workdir", workdir, "Output root (else $CORESETKIT_WORKDIR)");
  run->add_option("--trainer-cmd", run_args.trainer_cmd, "Trainer executable prefix");
  run->add_option("--train-template", run_args.train_template, "Full training command template");
  run->add_option("--predict-template", run_args.predict_template,
                  "Full prediction command template");

  std::string div_emb, div_sel, div_bins, div_out, div_plot;
  auto* diversity = app.add_subcommand("analyze-diversity", "Coverage statistics of a selection");
  diversity->add_option("--embeddings", div_emb, "Input .emb file")->required();
  diversity->add_option("--selection", div_sel, "coreset.json")->required();
  diversity->add_option("--bins", div_bins, "JSON with a bins array (defaults to the selection's)");
  diversity->add_option("--out", div_out, "Output stats.json")->required();
  diversity->add_option("--plot", div_plot, "Output coords.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*quantize) return Quantize(q);
    if (*patch) return Patch(p);
    if (*evaluate) return Evaluate(gt, pred, eval_out);
    if (*compose) return ComposeReplay(source, target, mix_out);
    if (*transfer) {
      if (preset.empty() && path_text.empty()) {
        throw ck::InvalidArgument("one of --preset or --path is required");
      }
      return PlanTransfer(transfer_args, preset, path_text, zero_shot, transfer_out);
    }
    if (*sweep) return PlanSweep(sweep_args, sweep_emb, sweep_domain, rates, sweep_bins, sweep_out);
    if (*run) return Run(manifest, run_args, workdir);
    if (*diversity) return AnalyzeDiversity(div_emb, div_sel, div_bins, div_out, div_plot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
