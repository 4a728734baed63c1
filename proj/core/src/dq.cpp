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

#include "coresetkit/dq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "coresetkit/error.hpp"
#include "coresetkit/philox.hpp"

namespace coresetkit::dq {
namespace {

void CheckRate(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw InvalidArgument("rate must lie in (0, 1], got " + std::to_string(rate));
  }
}

double ExactGain(std::size_t candidate, std::span<const std::size_t> partial,
                 std::span<const std::size_t> pool, const EmbeddingMatrix& m) {
  double attract = 0.0;
  for (std::size_t p : partial) attract += m.SquaredDistance(p, candidate);
  double repel = 0.0;
  for (std::size_t p : pool) {
    if (p != candidate) repel += m.SquaredDistance(p, candidate);
  }
  return attract - repel;
}

// Runs fn(begin, end) over [0, count) split across up to `threads` workers.
template <typename Fn>
void ParallelRanges(std::size_t count, unsigned threads, Fn fn) {
  constexpr std::size_t kMinPerThread = 2048;
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads),
                            std::max<std::size_t>(1, count / kMinPerThread));
  if (workers <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    pool.emplace_back([=] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(count, chunk));
}

}  // namespace

void BinPartition::Validate() const {
  if (bins.empty()) throw InvalidArgument("partition has no bins");
  std::vector<char> seen(source_n, 0);
  std::size_t total = 0;
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  std::size_t largest = 0;
  for (const auto& bin : bins) {
    if (bin.empty()) throw InvalidArgument("partition has an empty bin");
    smallest = std::min(smallest, bin.size());
    largest = std::max(largest, bin.size());
    for (std::size_t idx : bin) {
      if (idx >= source_n) throw InvalidArgument("bin index out of range");
      if (seen[idx]) throw InvalidArgument("bins overlap");
      seen[idx] = 1;
    }
    total += bin.size();
  }
  if (total != source_n) throw InvalidArgument("bins do not cover the patch set");
  if (largest - smallest > 1) throw InvalidArgument("bin sizes are unbalanced");
}

std::size_t Quota(std::size_t bin_size, double rate) {
  CheckRate(rate);
  // The small slack keeps products such as 0.15 * 10 = 1.4999999999999998
  // rounding half-up as intended.
  const double scaled = rate * static_cast<double>(bin_size);
  const auto rounded = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::min(bin_size, std::max<std::size_t>(1, rounded));
}

std::size_t BinCapacity(std::size_t n, std::size_t n_bins, std::size_t b) {
  return n / n_bins + (b < n % n_bins ? 1 : 0);
}

double Gain(std::size_t candidate, std::span<const std::size_t> partial_bin,
            std::span<const std::size_t> pool, const EmbeddingMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<char> role(n, 0);  // 1 = partial, 2 = pool
  for (std::size_t p : partial_bin) {
    if (p >= n) throw InvalidArgument("partial-bin index out of range");
    role[p] = 1;
  }
  bool candidate_in_pool = false;
  for (std::size_t p : pool) {
    if (p >= n) throw InvalidArgument("pool index out of range");
    if (role[p] == 1) throw InvalidArgument("partial bin and pool overlap");
    role[p] = 2;
    candidate_in_pool |= (p == candidate);
  }
  if (candidate >= n) throw InvalidArgument("candidate index out of range");
  if (!candidate_in_pool) throw InvalidArgument("candidate is not in the pool");
  return ExactGain(candidate, partial_bin, pool, m);
}

BinPartition FormBins(const EmbeddingMatrix& m, std::size_t n_bins,
                      BinOptions options) {
  const std::size_t n = m.rows();
  if (n_bins < 1 || n_bins > n) {
    throw InvalidArgument("bin count must lie in [1, " + std::to_string(n) +
                          "], got " + std::to_string(n_bins));
  }

  // Cached per-candidate sums of squared distances to the partial bin and to
  // the rest of the pool. They drift from the index-ordered sums by rounding
  // only, so every candidate whose cached gain is within `band` of the best is
  // re-evaluated exactly before choosing.
  std::vector<double> to_partial(n, 0.0);
  std::vector<double> to_pool(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = m.SquaredDistance(i, j);
      to_pool[i] += dist;
      to_pool[j] += dist;
    }
  }
  const double magnitude = *std::max_element(to_pool.begin(), to_pool.end());
  const double band = 8.0 * static_cast<double>(n + 1) *
                      std::numeric_limits<double>::epsilon() * magnitude;

  std::vector<std::size_t> pool(n);  // ascending
  std::iota(pool.begin(), pool.end(), std::size_t{0});

  BinPartition out;
  out.source_n = n;
  out.bins.reserve(n_bins);
  std::vector<std::size_t> partial_sorted;
  std::vector<std::size_t> near_best;

  for (std::size_t b = 0; b < n_bins; ++b) {
    const std::size_t capacity = BinCapacity(n, n_bins, b);
    std::vector<std::size_t> bin;
    bin.reserve(capacity);
    partial_sorted.clear();
    for (std::size_t idx : pool) to_partial[idx] = 0.0;

    while (bin.size() < capacity) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t idx : pool) best = std::max(best, to_partial[idx] - to_pool[idx]);

      near_best.clear();
      for (std::size_t idx : pool) {
        if (to_partial[idx] - to_pool[idx] >= best - band) near_best.push_back(idx);
      }
      std::size_t winner = near_best.front();
      if (near_best.size() > 1) {
        double winner_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t idx : near_best) {  // ascending, so '>' keeps lowest
          const double g = ExactGain(idx, partial_sorted, pool, m);
          if (g > winner_gain) {
            winner_gain = g;
            winner = idx;
          }
        }
      }

      bin.push_back(winner);
      partial_sorted.insert(
          std::lower_bound(partial_sorted.begin(), partial_sorted.end(), winner),
          winner);
      pool.erase(std::lower_bound(pool.begin(), pool.end(), winner));
      ParallelRanges(pool.size(), options.threads,
                     [&](std::size_t begin, std::size_t end) {
                       for (std::size_t k = begin; k < end; ++k) {
                         const std::size_t idx = pool[k];
                         const double dist = m.SquaredDistance(winner, idx);
                         to_partial[idx] += dist;
                         to_pool[idx] -= dist;
                       }
                     });
    }
    out.bins.push_back(std::move(bin));
  }
  return out;
}

std::vector<std::size_t> SampleWithoutReplacement(
    std::span<const std::size_t> population, std::size_t count,
    std::uint64_t seed, std::uint64_t stream) {
  if (count > population.size()) {
    throw InvalidArgument("sample larger than its population");
  }
  std::vector<std::size_t> items(population.begin(), population.end());
  Philox4x32 rng(seed, stream);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(count);
  std::sort(items.begin(), items.end());
  return items;
}

CoresetSelection SampleCoreset(const BinPartition& partition, double rate,
                               std::uint64_t seed) {
  CheckRate(rate);
  partition.Validate();
  CoresetSelection sel;
  sel.rate = rate;
  sel.seed = seed;
  sel.per_bin.reserve(partition.bins.size());
  for (std::size_t b = 0; b < partition.bins.size(); ++b) {
    const auto& bin = partition.bins[b];
    BinSelection picked{b, SampleWithoutReplacement(bin, Quota(bin.size(), rate),
                                                    seed, b)};
    sel.selected.insert(sel.selected.end(), picked.indices.begin(),
                        picked.indices.end());
    sel.per_bin.push_back(std::move(picked));
  }
  return sel;
}

CoresetSelection RandomBaselineCount(std::size_t n, std::size_t count,
                                     std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("random baseline needs n >= 1");
  if (count == 0 || count > n) {
    throw InvalidArgument("random baseline count must lie in [1, n]");
  }
  std::vector<std::size_t> population(n);
  std::iota(population.begin(), population.end(), std::size_t{0});
  CoresetSelection sel;
  sel.rate = static_cast<double>(count) / static_cast<double>(n);
  sel.seed = seed;
  sel.per_bin.push_back({0, SampleWithoutReplacement(population, count, seed, 0)});
  sel.selected = sel.per_bin.front().indices;
  return sel;
}

CoresetSelection RandomBaseline(std::size_t n, double rate, std::uint64_t seed) {
  CheckRate(rate);
  CoresetSelection sel = RandomBaselineCount(n, Quota(n, rate), seed);
  sel.rate = rate;
  return sel;
}

}  // namespace coresetkit::dq
