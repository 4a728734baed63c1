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

#include "coresetkit/patching.hpp"

#include <algorithm>

#include "coresetkit/error.hpp"

namespace coresetkit::patching {
namespace {

void CheckGeometry(std::size_t window, std::size_t stride) {
  if (window == 0 || stride == 0) {
    throw InvalidArgument("window and stride must be positive");
  }
  if (stride > window) {
    throw InvalidArgument("stride larger than the window would skip pixels");
  }
}

}  // namespace

void LabeledImage::Validate() const {
  if (image.pixels.height() == 0 || image.pixels.width() == 0) {
    throw InvalidArgument("image '" + name + "' is empty");
  }
  if (!image.pixels.SameShape(mask)) {
    throw InvalidArgument("image '" + name + "' and its mask differ in size");
  }
}

std::vector<std::size_t> WindowOrigins(std::size_t extent, std::size_t window,
                                       std::size_t stride) {
  CheckGeometry(window, stride);
  if (extent <= window) return {0};
  std::vector<std::size_t> origins;
  std::size_t origin = 0;
  for (; origin + window <= extent; origin += stride) origins.push_back(origin);
  if (origins.back() + window < extent) origins.push_back(extent - window);
  return origins;
}

std::size_t WindowsPerAxis(std::size_t extent, std::size_t window,
                           std::size_t stride) {
  CheckGeometry(window, stride);
  if (extent <= window) return 1;
  return (extent - window + stride - 1) / stride + 1;
}

PatchSet ExtractPatches(const LabeledImage& img, std::size_t window,
                        std::size_t stride) {
  CheckGeometry(window, stride);
  img.Validate();
  const auto& src = img.image.pixels;
  const std::size_t height = src.height();
  const std::size_t width = src.width();
  const std::size_t channels = src.channels();

  PatchSet out;
  out.window = window;
  out.stride = stride;
  const auto rows = WindowOrigins(height, window, stride);
  const auto cols = WindowOrigins(width, window, stride);
  out.patches.reserve(rows.size() * cols.size());
  for (std::size_t r0 : rows) {
    for (std::size_t c0 : cols) {
      Patch patch;
      patch.id = {img.name, static_cast<std::int64_t>(r0),
                  static_cast<std::int64_t>(c0)};
      patch.image.bit_depth = img.image.bit_depth;
      patch.image.pixels = Raster<std::uint16_t>(window, window, channels);
      patch.mask = LabelMask(window, window, 1);
      const std::size_t h = std::min(window, height - r0);
      const std::size_t w = std::min(window, width - c0);
      for (std::size_t r = 0; r < h; ++r) {
        const auto* src_px = &src.at(r0 + r, c0);
        std::copy(src_px, src_px + w * channels, &patch.image.pixels.at(r, 0));
        const auto* src_lb = &img.mask.at(r0 + r, c0);
        std::copy(src_lb, src_lb + w, &patch.mask.at(r, 0));
      }
      out.patches.push_back(std::move(patch));
    }
  }
  return out;
}

std::size_t CountPatches(
    std::span<const std::pair<std::size_t, std::size_t>> dims,
    std::size_t window, std::size_t stride) {
  std::size_t total = 0;
  for (const auto& [h, w] : dims) {
    if (h == 0 || w == 0) throw InvalidArgument("image dimensions must be positive");
    total += WindowsPerAxis(h, window, stride) * WindowsPerAxis(w, window, stride);
  }
  return total;
}

Image ToGrayscale(const Image& image) {
  const auto& px = image.pixels;
  if (px.channels() == 1) return image;
  Image out;
  out.bit_depth = image.bit_depth;
  out.pixels = Raster<std::uint16_t>(px.height(), px.width(), 1);
  const std::size_t c = px.channels();
  for (std::size_t i = 0; i < px.height() * px.width(); ++i) {
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < c; ++k) sum += px.data()[i * c + k];
    out.pixels.data()[i] = static_cast<std::uint16_t>((sum + c / 2) / c);
  }
  return out;
}

}  // namespace coresetkit::patching
