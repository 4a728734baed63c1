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

#include <optional>
#include <string>
#include <vector>

namespace coresetkit::replay {

// The source subset replayed during target finetuning.
struct SourceSubset {
  double rate = 1.0;                   // fraction of the source set
  std::vector<std::string> patches;    // selected source PatchIds
  std::string provenance;              // e.g. the coreset file it came from
};

struct ReplayMix {
  double source_rate = 0.0;
  std::vector<std::string> source_patches;
  std::vector<std::string> target_patches;
  std::string provenance;

  std::size_t size() const {
    return source_patches.size() + target_patches.size();
  }
  // Flat listing: source entries first, then target entries. Shuffling is
  // the trainer's job.
  std::vector<std::string> Entries() const;
};

// Unions a source subset (or nothing, the 0% row) with the full target set.
// Throws InvalidArgument on an empty target, duplicate ids within a domain,
// or any id present in both domains.
ReplayMix ComposeReplay(const std::optional<SourceSubset>& source,
                        const std::vector<std::string>& target);

}  // namespace coresetkit::replay
