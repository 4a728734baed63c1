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
#include <vector>

#include "coresetkit/dq.hpp"
#include "coresetkit/embeddings.hpp"

// Feature-space coverage of a selection, and a deterministic 2-D projection
// for plotting.
namespace coresetkit::diversity {

struct CoverageStats {
  double mean_nn_distance = 0.0;    // mean over patches of distance to nearest selected
  double max_nn_distance = 0.0;     // covering radius
  double mean_pairwise_selected = 0.0;
  double bin_occupancy = 0.0;       // fraction of bins holding a selected patch
};

// Euclidean distances in double. Throws InvalidArgument on an empty
// selection or out-of-range indices.
CoverageStats Coverage(const EmbeddingMatrix& m,
                       const dq::CoresetSelection& sel,
                       const dq::BinPartition& bins);

// Distance from every row to its nearest selected row.
std::vector<double> NearestSelectedDistances(
    const EmbeddingMatrix& m, const std::vector<std::size_t>& selected);

struct Projection {
  std::vector<double> x;
  std::vector<double> y;
  bool zero_variance = false;
};

// First two principal components of the mean-centred rows. Each component
// is oriented so its largest-magnitude loading is positive (lowest feature
// index on ties). Requires at least two rows.
Projection Project2d(const EmbeddingMatrix& m);

}  // namespace coresetkit::diversity
