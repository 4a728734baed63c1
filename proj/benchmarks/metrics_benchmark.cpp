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

#include <random>

#include <benchmark/benchmark.h>

#include "coresetkit/metrics.hpp"

namespace {

coresetkit::LabelMask Blobs(std::size_t side, std::uint32_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  coresetkit::LabelMask mask(side, side);
  for (std::uint32_t k = 1; k <= count; ++k) {
    const std::size_t r0 = gen() % (side - 12), c0 = gen() % (side - 12);
    for (std::size_t r = r0; r < r0 + 12; ++r) {
      for (std::size_t c = c0; c < c0 + 12; ++c) mask.at(r, c) = k;
    }
  }
  return mask;
}

void BM_PairwiseMetrics(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto gt = Blobs(side, 200, 1);
  const auto pred = Blobs(side, 200, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coresetkit::metrics::PairwiseMetrics(gt, pred));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<long>(2 * side * side * 4));
}
BENCHMARK(BM_PairwiseMetrics)->Arg(224)->Arg(1024);

void BM_MatchInstances(benchmark::State& state) {
  const auto gt = Blobs(512, 300, 3);
  auto pred = gt;
  for (std::size_t i = 0; i < pred.size(); i += 7) pred.data()[i] = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coresetkit::metrics::MatchInstances(gt, pred));
  }
}
BENCHMARK(BM_MatchInstances);

}  // namespace
