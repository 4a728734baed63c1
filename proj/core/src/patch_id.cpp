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

#include "coresetkit/patch_id.hpp"

#include <charconv>

#include "coresetkit/error.hpp"

namespace coresetkit {
namespace {

std::int64_t ParseOffset(std::string_view field, std::string_view whole) {
  std::int64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end || value < 0) {
    throw FormatError("malformed patch id '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::string PatchId::ToString() const {
  return source_image + ":" + std::to_string(row_offset) + ":" +
         std::to_string(col_offset);
}

PatchId PatchId::Parse(std::string_view text) {
  const auto last = text.rfind(':');
  if (last == std::string_view::npos || last == 0) {
    throw FormatError("malformed patch id '" + std::string(text) + "'");
  }
  const auto middle = text.rfind(':', last - 1);
  if (middle == std::string_view::npos || middle == 0) {
    throw FormatError("malformed patch id '" + std::string(text) + "'");
  }
  PatchId id;
  id.source_image = std::string(text.substr(0, middle));
  id.row_offset = ParseOffset(text.substr(middle + 1, last - middle - 1), text);
  id.col_offset = ParseOffset(text.substr(last + 1), text);
  return id;
}

}  // namespace coresetkit
