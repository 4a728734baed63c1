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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coresetkit/patch_id.hpp"
#include "coresetkit/raster.hpp"

namespace coresetkit::patching {

inline constexpr std::size_t kDefaultWindow = 224;
inline constexpr std::size_t kDefaultStride = 112;

struct LabeledImage {
  std::string name;
  Image image;
  LabelMask mask;

  // Throws InvalidArgument when image and mask disagree on H/W or are empty.
  void Validate() const;
};

struct Patch {
  PatchId id;
  Image image;     // window x window, zero-padded where the source is smaller
  LabelMask mask;  // labels copied verbatim
};

struct PatchSet {
  std::size_t window = kDefaultWindow;
  std::size_t stride = kDefaultStride;
  std::vector<Patch> patches;  // row-major origin order
};

// Window origins along one axis of length `extent`: 0, stride, 2*stride, ...
// while the window fits, then one border-aligned origin (extent - window)
// when the last regular window stops short. Extents not exceeding the window
// produce the single origin 0.
std::vector<std::size_t> WindowOrigins(std::size_t extent, std::size_t window,
                                       std::size_t stride);

// Number of windows along one axis: 1 if extent <= window, otherwise
// ceil((extent - window) / stride) + 1.
std::size_t WindowsPerAxis(std::size_t extent, std::size_t window,
                           std::size_t stride);

PatchSet ExtractPatches(const LabeledImage& img,
                        std::size_t window = kDefaultWindow,
                        std::size_t stride = kDefaultStride);

std::size_t CountPatches(
    std::span<const std::pair<std::size_t, std::size_t>> dims,
    std::size_t window = kDefaultWindow, std::size_t stride = kDefaultStride);

// Channel-mean reduction to a single channel (rounded to nearest).
Image ToGrayscale(const Image& image);

}  // namespace coresetkit::patching
