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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace coresetkit {

// Identity of one sliding-window patch: the source image name plus the
// window origin in pixels. Canonical string form is "image:row:col".
struct PatchId {
  std::string source_image;
  std::int64_t row_offset = 0;
  std::int64_t col_offset = 0;

  std::string ToString() const;

  // Parses the canonical form. The image name may itself contain ':'; the
  // last two fields are always the offsets. Throws FormatError.
  static PatchId Parse(std::string_view text);

  friend auto operator<=>(const PatchId&, const PatchId&) = default;
};

}  // namespace coresetkit
