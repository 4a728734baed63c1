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
#include <vector>

#include "coresetkit/error.hpp"

namespace coresetkit {

// Dense H x W x C array, row-major with interleaved channels.
template <typename T>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(std::size_t height, std::size_t width, std::size_t channels = 1,
         T fill = T{})
      : height_(height),
        width_(width),
        channels_(channels),
        data_(height * width * channels, fill) {}
  Raster(std::size_t height, std::size_t width, std::size_t channels,
         std::vector<T> data)
      : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
    if (data_.size() != height_ * width_ * channels_) {
      throw InvalidArgument("raster data size does not match its shape");
    }
  }

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& at(std::size_t r, std::size_t c, std::size_t ch = 0) {
    return data_[(r * width_ + c) * channels_ + ch];
  }
  const T& at(std::size_t r, std::size_t c, std::size_t ch = 0) const {
    return data_[(r * width_ + c) * channels_ + ch];
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <typename U>
  bool SameShape(const Raster<U>& other) const {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 1;
  std::vector<T> data_;
};

// Intensity image; 8-bit sources are widened, bit_depth remembers the origin.
struct Image {
  Raster<std::uint16_t> pixels;
  int bit_depth = 8;

  friend bool operator==(const Image&, const Image&) = default;
};

// Instance label mask; 0 is background, every positive value one instance.
using LabelMask = Raster<std::uint32_t>;

}  // namespace coresetkit
