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

#include "synthetic.hpp"

#include <atomic>
#include <cmath>
#include <random>

#include <unistd.h>

#include "coresetkit/documents.hpp"
#include "coresetkit/raster_io.hpp"

namespace fs = std::filesystem;

namespace coresetkit::testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("coresetkit-" + tag + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<std::string> SequentialIds(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("img" + std::to_string(i) + ":0:0");
  return ids;
}

EmbeddingMatrix RandomMatrix(std::size_t n, std::size_t d, std::uint64_t seed,
                             double scale) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::vector<float> data(n * d);
  for (auto& v : data) v = static_cast<float>(scale * normal(gen));
  return EmbeddingMatrix(n, d, std::move(data), SequentialIds(n));
}

EmbeddingMatrix GaussianClusters(std::size_t n, std::size_t d, std::size_t k,
                                 double sigma, double spacing, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const double offset = spacing / std::sqrt(2.0);
  std::vector<float> data(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cluster = i % k;
    for (std::size_t j = 0; j < d; ++j) {
      const double centre = j == cluster ? offset : 0.0;
      data[i * d + j] = static_cast<float>(centre + sigma * normal(gen));
    }
  }
  return EmbeddingMatrix(n, d, std::move(data), SequentialIds(n));
}

LabelMask RandomMask(std::size_t h, std::size_t w, std::size_t max_instances,
                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  LabelMask mask(h, w);
  const std::size_t count = std::uniform_int_distribution<std::size_t>(0, max_instances)(gen);
  for (std::size_t k = 1; k <= count; ++k) {
    std::uniform_int_distribution<std::size_t> row(0, h - 1), col(0, w - 1);
    std::size_t r0 = row(gen), r1 = row(gen), c0 = col(gen), c1 = col(gen);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    for (std::size_t r = r0; r <= r1; ++r) {
      for (std::size_t c = c0; c <= c1; ++c) mask.at(r, c) = static_cast<std::uint32_t>(k);
    }
  }
  return mask;
}

LabelMask DiskMask(std::size_t h, std::size_t w, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  LabelMask mask(h, w);
  for (std::size_t k = 1; k <= count; ++k) {
    const double radius = std::uniform_real_distribution<double>(3.0, 7.0)(gen);
    const double cr = std::uniform_real_distribution<double>(0.0, static_cast<double>(h))(gen);
    const double cc = std::uniform_real_distribution<double>(0.0, static_cast<double>(w))(gen);
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        const double dr = static_cast<double>(r) - cr, dc = static_cast<double>(c) - cc;
        if (dr * dr + dc * dc <= radius * radius) mask.at(r, c) = static_cast<std::uint32_t>(k);
      }
    }
  }
  return mask;
}

void WriteSyntheticDomain(const fs::path& root, const SyntheticDomain& d) {
  const fs::path dir = root / d.name;
  fs::create_directories(dir / "test" / "images");
  fs::create_directories(dir / "test" / "masks");
  documents::PatchLedger ledger;
  ledger.window = 224;
  ledger.stride = 112;
  ledger.image_dir = "images";
  ledger.mask_dir = "masks";
  for (std::size_t i = 0; i < d.images; ++i) {
    const std::string stem = d.name + "_" + std::to_string(i);
    const auto mask = DiskMask(d.height, d.width, d.instances, d.seed * 1000 + i);
    Image image{Raster<std::uint16_t>(d.height, d.width), 8};
    for (std::size_t k = 0; k < mask.size(); ++k) {
      image.pixels.data()[k] = mask.data()[k] ? 200 : 20;
    }
    WriteImage(image, dir / "test" / "images" / (stem + ".png"));
    WriteMask(mask, dir / "test" / "masks" / (stem + ".tif"));
    const std::string id = stem + ":0:0";
    ledger.entries.push_back({id, id + ".png", id + ".tif"});
  }
  documents::WriteJson(dir / "patches.json", documents::ToJson(ledger));
}

}  // namespace coresetkit::testing
