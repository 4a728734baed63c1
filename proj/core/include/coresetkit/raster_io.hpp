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

#include <filesystem>

#include "coresetkit/raster.hpp"

namespace coresetkit {

// PNG and TIFF (8/16-bit; TIFF masks also 32-bit unsigned) readers/writers.
// The format is chosen from the file extension: .png, .tif, .tiff.

Image ReadImage(const std::filesystem::path& path);
void WriteImage(const Image& image, const std::filesystem::path& path);

// Reads a single-channel label image. Multi-channel files are rejected.
LabelMask ReadMask(const std::filesystem::path& path);

// Writes 16-bit when every label fits, 32-bit otherwise (TIFF only; a PNG
// target with labels above 65535 throws).
void WriteMask(const LabelMask& mask, const std::filesystem::path& path);

bool IsRasterFile(const std::filesystem::path& path);

}  // namespace coresetkit
