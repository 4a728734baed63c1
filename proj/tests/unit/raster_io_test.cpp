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

#include "coresetkit/raster_io.hpp"

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "coresetkit/error.hpp"
#include "synthetic.hpp"

namespace coresetkit {
namespace {

using testing::TempDir;

Image RandomImage(std::size_t h, std::size_t w, std::size_t ch, int depth, unsigned seed) {
  std::mt19937 gen(seed);
  Image img{Raster<std::uint16_t>(h, w, ch), depth};
  const unsigned max = depth == 8 ? 255 : 65535;
  for (auto& v : img.pixels.data()) v = static_cast<std::uint16_t>(gen() % (max + 1));
  return img;
}

TEST(RasterIoTest, ImagesRoundTripInBothFormats) {
  TempDir dir("io");
  for (const char* ext : {".png", ".tif"}) {
    for (int depth : {8, 16}) {
      for (std::size_t ch : {1u, 3u}) {
        const auto img = RandomImage(13, 17, ch, depth, static_cast<unsigned>(depth + ch));
        const auto path = dir / ("img" + std::to_string(depth) + std::to_string(ch) + ext);
        WriteImage(img, path);
        EXPECT_EQ(ReadImage(path), img) << path;
      }
    }
  }
}

TEST(RasterIoTest, MasksRoundTripWithLargeLabels) {
  TempDir dir("io");
  LabelMask small = testing::RandomMask(20, 30, 6, 1);
  WriteMask(small, dir / "small.png");
  EXPECT_EQ(ReadMask(dir / "small.png"), small);
  WriteMask(small, dir / "small.tif");
  EXPECT_EQ(ReadMask(dir / "small.tif"), small);

  LabelMask big(4, 4);
  big.at(1, 1) = 70000;
  big.at(2, 3) = 4000000000u;
  WriteMask(big, dir / "big.tiff");
  EXPECT_EQ(ReadMask(dir / "big.tiff"), big);
  EXPECT_THROW(WriteMask(big, dir / "big.png"), InvalidArgument);
}

TEST(RasterIoTest, MultiChannelMasksAreRejected) {
  TempDir dir("io");
  WriteImage(RandomImage(4, 4, 3, 8, 2), dir / "rgb.png");
  EXPECT_THROW(ReadMask(dir / "rgb.png"), FormatError);
}

TEST(RasterIoTest, ErrorsForMissingCorruptOrUnknownFiles) {
  TempDir dir("io");
  EXPECT_THROW(ReadImage(dir / "missing.png"), IoError);
  {
    std::ofstream out(dir / "junk.png");
    out << "not a png";
  }
  EXPECT_ANY_THROW(ReadImage(dir / "junk.png"));
  EXPECT_THROW(WriteImage(RandomImage(2, 2, 1, 8, 1), dir / "x.bmp"), InvalidArgument);
  EXPECT_TRUE(IsRasterFile("a/b.TIF"));
  EXPECT_TRUE(IsRasterFile("a.png"));
  EXPECT_FALSE(IsRasterFile("a.json"));
}

}  // namespace
}  // namespace coresetkit
