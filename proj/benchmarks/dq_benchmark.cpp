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
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "coresetkit/dq.hpp"

namespace {

coresetkit::EmbeddingMatrix Clusters(std::size_t n, std::size_t d) {
  std::mt19937_64 gen(1);
  std::normal_distribution<float> normal;
  std::vector<float> data(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      data[i * d + k] = normal(gen) + (k == i % d ? 6.0f : 0.0f);
    }
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i) + ":0:0");
  return coresetkit::EmbeddingMatrix(n, d, std::move(data), std::move(ids));
}

void BM_FormBins(benchmark::State& state) {
  const auto m = Clusters(static_cast<std::size_t>(state.range(0)), 64);
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coresetkit::dq::FormBins(m, 5, {threads}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FormBins)
    ->ArgsProduct({{500, 1000, 2000, 4000}, {1}})
    ->Args({4000, 4})
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_SampleCoreset(benchmark::State& state) {
  const auto m = Clusters(4000, 8);
  const auto bins = coresetkit::dq::FormBins(m, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coresetkit::dq::SampleCoreset(bins, 0.1, seed++));
  }
}
BENCHMARK(BM_SampleCoreset);

}  // namespace
