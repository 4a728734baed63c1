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

#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "coresetkit/error.hpp"

namespace coresetkit::patching {
namespace {

LabeledImage Ramp(std::size_t h, std::size_t w, std::size_t channels = 1) {
  LabeledImage img;
  img.name = "ramp";
  img.image.pixels = Raster<std::uint16_t>(h, w, channels);
  img.mask = LabelMask(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t ch = 0; ch < channels; ++ch) {
        img.image.pixels.at(r, c, ch) = static_cast<std::uint16_t>((r * 7 + c * 3 + ch) % 251);
      }
      img.mask.at(r, c) = static_cast<std::uint32_t>(r * w + c + 70000);
    }
  }
  return img;
}

std::size_t G(std::size_t x, std::size_t w = 224, std::size_t s = 112) {
  return x <= w ? 1 : (x - w + s - 1) / s + 1;
}

TEST(WindowOriginsTest, AddsABorderAlignedOrigin) {
  EXPECT_EQ(WindowOrigins(224, 224, 112), (std::vector<std::size_t>{0}));
  EXPECT_EQ(WindowOrigins(336, 224, 112), (std::vector<std::size_t>{0, 112}));
  EXPECT_EQ(WindowOrigins(448, 224, 112), (std::vector<std::size_t>{0, 112, 224}));
  EXPECT_EQ(WindowOrigins(500, 224, 112), (std::vector<std::size_t>{0, 112, 224, 276}));
  EXPECT_EQ(WindowOrigins(100, 224, 112), (std::vector<std::size_t>{0}));
}

TEST(WindowOriginsTest, CountMatchesClosedForm) {
  for (std::size_t w : {1u, 5u, 16u, 224u}) {
    for (std::size_t s = 1; s <= w; s += (w > 8 ? w / 4 : 1)) {
      for (std::size_t x = 1; x <= 3 * w + 7; ++x) {
        ASSERT_EQ(WindowOrigins(x, w, s).size(), G(x, w, s)) << x << " " << w << " " << s;
        ASSERT_EQ(WindowsPerAxis(x, w, s), G(x, w, s));
      }
    }
  }
}

TEST(WindowOriginsTest, RejectsBadGeometry) {
  EXPECT_THROW(WindowOrigins(10, 0, 1), InvalidArgument);
  EXPECT_THROW(WindowOrigins(10, 4, 0), InvalidArgument);
  EXPECT_THROW(WindowOrigins(10, 4, 5), InvalidArgument);
}

TEST(CountPatchesTest, Examples) {
  const std::vector<std::pair<std::size_t, std::size_t>> a{{224, 224}};
  const std::vector<std::pair<std::size_t, std::size_t>> b{{336, 336}, {224, 224}};
  const std::vector<std::pair<std::size_t, std::size_t>> c{{448, 448}};
  const std::vector<std::pair<std::size_t, std::size_t>> d{{500, 500}};
  EXPECT_EQ(CountPatches(a), 1u);
  EXPECT_EQ(CountPatches(b), 5u);
  EXPECT_EQ(CountPatches(c), 9u);
  EXPECT_EQ(CountPatches(d), 16u);
}

TEST(ExtractPatchesTest, PatchesAreWindowSizedAndCopied) {
  const auto img = Ramp(60, 45);
  const auto set = ExtractPatches(img, 20, 10);
  ASSERT_EQ(set.patches.size(), G(60, 20, 10) * G(45, 20, 10));
  for (const auto& p : set.patches) {
    ASSERT_EQ(p.image.pixels.height(), 20u);
    ASSERT_EQ(p.mask.width(), 20u);
    EXPECT_EQ(p.id.source_image, "ramp");
    for (std::size_t r = 0; r < 20; ++r) {
      for (std::size_t c = 0; c < 20; ++c) {
        const auto sr = static_cast<std::size_t>(p.id.row_offset) + r;
        const auto sc = static_cast<std::size_t>(p.id.col_offset) + c;
        ASSERT_EQ(p.image.pixels.at(r, c), img.image.pixels.at(sr, sc));
        ASSERT_EQ(p.mask.at(r, c), img.mask.at(sr, sc));
      }
    }
  }
}

TEST(ExtractPatchesTest, RowMajorOriginOrder) {
  const auto set = ExtractPatches(Ramp(30, 30), 20, 10);
  std::vector<std::pair<std::int64_t, std::int64_t>> origins;
  for (const auto& p : set.patches) origins.push_back({p.id.row_offset, p.id.col_offset});
  EXPECT_EQ(origins, (std::vector<std::pair<std::int64_t, std::int64_t>>{
                         {0, 0}, {0, 10}, {10, 0}, {10, 10}}));
}

TEST(ExtractPatchesTest, EveryPixelIsCovered) {
  for (auto [h, w] : std::vector<std::pair<std::size_t, std::size_t>>{
           {20, 20}, {37, 53}, {41, 20}, {100, 21}}) {
    const auto set = ExtractPatches(Ramp(h, w), 20, 8);
    std::vector<int> hits(h * w, 0);
    for (const auto& p : set.patches) {
      for (std::size_t r = 0; r < 20; ++r) {
        for (std::size_t c = 0; c < 20; ++c) {
          ++hits[(p.id.row_offset + r) * w + p.id.col_offset + c];
        }
      }
    }
    for (int v : hits) ASSERT_GE(v, 1);
  }
}

TEST(ExtractPatchesTest, SmallImagesAreZeroPadded) {
  const auto img = Ramp(5, 7, 3);
  const auto set = ExtractPatches(img, 16, 8);
  ASSERT_EQ(set.patches.size(), 1u);
  const auto& p = set.patches[0];
  EXPECT_EQ(p.image.pixels.channels(), 3u);
  EXPECT_EQ(p.image.pixels.at(4, 6, 2), img.image.pixels.at(4, 6, 2));
  EXPECT_EQ(p.image.pixels.at(5, 0, 0), 0);
  EXPECT_EQ(p.image.pixels.at(0, 7, 1), 0);
  EXPECT_EQ(p.mask.at(4, 6), img.mask.at(4, 6));
  EXPECT_EQ(p.mask.at(15, 15), 0u);
}

TEST(ExtractPatchesTest, RejectsMismatchedOrEmptyInput) {
  auto img = Ramp(10, 10);
  img.mask = LabelMask(10, 9);
  EXPECT_THROW(ExtractPatches(img, 4, 2), InvalidArgument);
  LabeledImage empty;
  EXPECT_THROW(ExtractPatches(empty, 4, 2), InvalidArgument);
}

TEST(ToGrayscaleTest, RoundedChannelMean) {
  Image rgb{Raster<std::uint16_t>(1, 2, 3, std::vector<std::uint16_t>{1, 2, 2, 10, 20, 31}), 8};
  const auto g = ToGrayscale(rgb);
  EXPECT_EQ(g.pixels.channels(), 1u);
  EXPECT_EQ(g.pixels.at(0, 0), 2);   // 5/3 -> 2
  EXPECT_EQ(g.pixels.at(0, 1), 20);  // 61/3 -> 20
  EXPECT_EQ(g.bit_depth, 8);
  const auto same = ToGrayscale(g);
  EXPECT_EQ(same, g);
}

}  // namespace
}  // namespace coresetkit::patching
