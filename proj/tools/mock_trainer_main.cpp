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

// Stand-in trainer for exercising the experiment runner without a model.
//
//   mock-trainer --mode identity --subset s.json --init m0 --out m1 ...
//   mock-trainer --mode identity --predict --model m1 --images t/images --out p
//
// Training writes a small JSON "model" recording the subset lineage.
// Prediction derives masks from the ground truth next to the images
// (<images>/../masks): identity copies them, empty writes background only,
// dilate grows every instance by one pixel.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "coresetkit/documents.hpp"
#include "coresetkit/error.hpp"
#include "coresetkit/raster_io.hpp"

namespace fs = std::filesystem;
namespace ck = coresetkit;
namespace docs = coresetkit::documents;

namespace {

ck::LabelMask Dilate(const ck::LabelMask& in) {
  ck::LabelMask out = in;
  const long h = static_cast<long>(in.height());
  const long w = static_cast<long>(in.width());
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      if (in.at(r, c) != 0) continue;
      std::uint32_t best = 0;
      for (long dr = -1; dr <= 1; ++dr) {
        for (long dc = -1; dc <= 1; ++dc) {
          const long rr = r + dr, cc = c + dc;
          if (rr < 0 || cc < 0 || rr >= h || cc >= w) continue;
          const std::uint32_t v = in.at(rr, cc);
          if (v != 0 && (best == 0 || v < best)) best = v;
        }
      }
      out.at(r, c) = best;
    }
  }
  return out;
}

int Train(const std::string& mode, const std::string& subset, const std::string& init,
          const std::string& out, const nlohmann::json& hyper) {
  const auto listing = docs::ReadPatchListing(subset);
  nlohmann::json lineage = nlohmann::json::array();
  if (!init.empty()) lineage = docs::ReadJson(init).at("lineage");
  lineage.push_back({{"subset", fs::path(subset).filename().string()},
                     {"patches", listing.size()}});
  docs::WriteJson(out, {{"kind", "mock_model"},
                        {"mode", mode},
                        {"hyperparameters", hyper},
                        {"lineage", std::move(lineage)}});
  return 0;
}

int Predict(const std::string& mode, const std::string& model, const fs::path& images,
            const fs::path& out) {
  if (!fs::exists(model)) throw ck::IoError("missing model " + model);
  const fs::path masks = images.parent_path() / "masks";
  fs::create_directories(out);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(images)) {
    if (e.is_regular_file() && ck::IsRasterFile(e.path())) files.push_back(e.path());
  }
  for (const auto& f : files) {
    const std::string stem = f.stem().string();
    fs::path gt_path;
    for (const char* ext : {".tif", ".tiff", ".png"}) {
      if (fs::exists(masks / (stem + ext))) {
        gt_path = masks / (stem + ext);
        break;
      }
    }
    if (gt_path.empty()) throw ck::IoError("no ground truth for " + f.string());
    const auto gt = ck::ReadMask(gt_path);
    ck::LabelMask pred;
    if (mode == "identity") {
      pred = gt;
    } else if (mode == "empty") {
      pred = ck::LabelMask(gt.height(), gt.width());
    } else {
      pred = Dilate(gt);
    }
    ck::WriteMask(pred, out / (stem + ".tif"));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock trainer for runner tests"};
  std::string mode = "identity", subset, init, out, model, images, fail_subset;
  std::string channel = "grayscale";
  double lr = 0.1, wd = 1e-4;
  int epochs = 500, checkpoint = 50;
  bool predict = false;
  app.add_option("--mode", mode, "identity, empty or dilate")
      ->check(CLI::IsMember({"identity", "empty", "dilate"}));
  app.add_flag("--predict", predict, "Prediction invocation");
  app.add_option("--subset", subset, "Training listing");
  app.add_option("--init", init, "Model to start from (empty = scratch)");
  app.add_option("--out", out, "Model path, or prediction directory with --predict");
  app.add_option("--lr", lr);
  app.add_option("--wd", wd);
  app.add_option("--epochs", epochs);
  app.add_option("--channel", channel);
  app.add_option("--checkpoint-every", checkpoint);
  app.add_option("--model", model, "Model to predict with");
  app.add_option("--images", images, "Directory of test images");
  app.add_option("--fail-subset", fail_subset,
                 "Exit 1 when the training listing path contains this text");
  CLI11_PARSE(app, argc, argv);

  try {
    if (out.empty()) throw ck::InvalidArgument("--out is required");
    if (predict) return Predict(mode, model, images, out);
    if (subset.empty()) throw ck::InvalidArgument("--subset is required");
    if (!fail_subset.empty() && subset.find(fail_subset) != std::string::npos) {
      std::cerr << "mock-trainer: failing on " << subset << "\n";
      return 1;
    }
    return Train(mode, subset, init, out,
                 {{"lr", lr}, {"wd", wd}, {"epochs", epochs}, {"channel", channel},
                  {"checkpoint_every", checkpoint}});
  } catch (const std::exception& e) {
    std::cerr << "mock-trainer: " << e.what() << "\n";
    return 2;
  }
}
