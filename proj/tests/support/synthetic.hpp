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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "coresetkit/embeddings.hpp"
#include "coresetkit/raster.hpp"

namespace coresetkit::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Ids "img<i>:0:0" for i in [0, n).
std::vector<std::string> SequentialIds(std::size_t n);

// Standard-normal matrix scaled by `scale`.
EmbeddingMatrix RandomMatrix(std::size_t n, std::size_t d, std::uint64_t seed,
                             double scale = 1.0);

// n points in d >= k dims around k centres c_j = spacing / sqrt(2) * e_j, so
// centres are exactly `spacing` apart. Point i belongs to cluster i % k.
EmbeddingMatrix GaussianClusters(std::size_t n, std::size_t d, std::size_t k,
                                 double sigma, double spacing, std::uint64_t seed);

// Random instance mask with up to `max_instances` rectangles, possibly
// overlapping (later ones overwrite).
LabelMask RandomMask(std::size_t h, std::size_t w, std::size_t max_instances,
                     std::uint64_t seed);

// Disk-shaped instances on a background, labels 1..count.
LabelMask DiskMask(std::size_t h, std::size_t w, std::size_t count, std::uint64_t seed);

struct SyntheticDomain {
  std::string name;
  std::size_t images = 3;
  std::size_t height = 48;
  std::size_t width = 64;
  std::size_t instances = 4;
  std::uint64_t seed = 1;
};

// Writes <root>/<name>/patches.json (a ledger listing one patch per image) and
// <root>/<name>/test/{images,masks}. Images are 8-bit PNG, masks 16-bit TIFF.
void WriteSyntheticDomain(const std::filesystem::path& root, const SyntheticDomain& d);

}  // namespace coresetkit::testing
