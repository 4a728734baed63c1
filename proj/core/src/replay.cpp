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

#include "coresetkit/replay.hpp"

#include <unordered_set>

#include "coresetkit/error.hpp"

namespace coresetkit::replay {

std::vector<std::string> ReplayMix::Entries() const {
  std::vector<std::string> out;
  out.reserve(size());
  out.insert(out.end(), source_patches.begin(), source_patches.end());
  out.insert(out.end(), target_patches.begin(), target_patches.end());
  return out;
}

ReplayMix ComposeReplay(const std::optional<SourceSubset>& source,
                        const std::vector<std::string>& target) {
  if (target.empty()) throw InvalidArgument("replay target set is empty");
  std::unordered_set<std::string_view> target_ids;
  target_ids.reserve(target.size());
  for (const auto& id : target) {
    if (!target_ids.insert(id).second) {
      throw InvalidArgument("duplicate target patch id '" + id + "'");
    }
  }

  ReplayMix mix;
  mix.target_patches = target;
  if (!source) return mix;

  if (!(source->rate >= 0.0 && source->rate <= 1.0)) {
    throw InvalidArgument("source rate must lie in [0, 1]");
  }
  if (source->rate == 0.0 && !source->patches.empty()) {
    throw InvalidArgument("a 0% source subset cannot list patches");
  }
  std::unordered_set<std::string_view> source_ids;
  source_ids.reserve(source->patches.size());
  for (const auto& id : source->patches) {
    if (!source_ids.insert(id).second) {
      throw InvalidArgument("duplicate source patch id '" + id + "'");
    }
    if (target_ids.contains(id)) {
      throw InvalidArgument("patch id '" + id +
                            "' appears in both source and target domains");
    }
  }
  mix.source_rate = source->rate;
  mix.source_patches = source->patches;
  mix.provenance = source->provenance;
  return mix;
}

}  // namespace coresetkit::replay
