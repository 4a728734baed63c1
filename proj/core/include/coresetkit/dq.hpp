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
#include <span>
#include <utility>
#include <vector>

#include "coresetkit/embeddings.hpp"

// Dataset quantization: greedy submodular bin formation followed by uniform
// per-bin sampling.
namespace coresetkit::dq {

inline constexpr std::size_t kDefaultBins = 5;

// Ordered, disjoint bins covering {0 .. source_n - 1}. Each bin lists patch
// indices in the order the greedy construction added them.
struct BinPartition {
  std::vector<std::vector<std::size_t>> bins;
  std::size_t source_n = 0;

  // Throws InvalidArgument unless bins are non-empty, disjoint, cover the
  // index range exactly, and differ in size by at most one.
  void Validate() const;

  friend bool operator==(const BinPartition&, const BinPartition&) = default;
};

struct BinSelection {
  std::size_t bin = 0;
  std::vector<std::size_t> indices;  // ascending

  friend bool operator==(const BinSelection&, const BinSelection&) = default;
};

struct CoresetSelection {
  double rate = 1.0;
  std::uint64_t seed = 0;
  std::vector<BinSelection> per_bin;
  std::vector<std::size_t> selected;  // per_bin concatenated in bin order

  friend bool operator==(const CoresetSelection&,
                         const CoresetSelection&) = default;
};

// Samples taken from a bin of `bin_size` at `rate`: max(1, round-half-up of
// rate * bin_size), never more than bin_size. Throws on rate outside (0, 1].
std::size_t Quota(std::size_t bin_size, double rate);

// Size of bin `b` when n patches are split into n_bins balanced bins; the
// first n % n_bins bins get the extra element.
std::size_t BinCapacity(std::size_t n, std::size_t n_bins, std::size_t b);

// Submodular gain of adding `candidate` to the partial bin:
//   sum_{p in partial} |f(p) - f(c)|^2 - sum_{p in pool, p != c} |f(p) - f(c)|^2
// Both sums run in span order, in double; pass ascending spans for the
// index-ordered sums FormBins uses.
double Gain(std::size_t candidate, std::span<const std::size_t> partial_bin,
            std::span<const std::size_t> pool, const EmbeddingMatrix& m);

struct BinOptions {
  // Worker threads for the per-step cache update; results do not depend on it.
  unsigned threads = 1;
};

// Builds n_bins bins one after another. Each bin starts empty and repeatedly
// takes the remaining patch with the largest gain (lowest index on ties)
// until it reaches its capacity; chosen patches leave the pool.
BinPartition FormBins(const EmbeddingMatrix& m, std::size_t n_bins,
                      BinOptions options = {});

// Draws Quota(|bin|, rate) indices uniformly without replacement from each
// bin, using a Philox stream keyed by (seed, bin index).
CoresetSelection SampleCoreset(const BinPartition& partition, double rate,
                               std::uint64_t seed);

// Uniform sample of exactly `count` distinct indices from {0 .. n - 1},
// returned ascending. Uses Philox stream (seed, stream).
std::vector<std::size_t> SampleWithoutReplacement(
    std::span<const std::size_t> population, std::size_t count,
    std::uint64_t seed, std::uint64_t stream);

// Random-sampling baseline: Quota(n, rate) indices from a single pseudo-bin.
CoresetSelection RandomBaseline(std::size_t n, double rate, std::uint64_t seed);

// Same as RandomBaseline but with an explicit sample size, for count-matched
// comparisons against a DQ selection.
CoresetSelection RandomBaselineCount(std::size_t n, std::size_t count,
                                     std::uint64_t seed);

}  // namespace coresetkit::dq
