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

#include "coresetkit/diversity.hpp"

namespace {

coresetkit::EmbeddingMatrix Random(std::size_t n, std::size_t d) {
  std::mt19937_64 gen(5);
  std::normal_distribution<float> normal;
  std::vector<float> data(n * d);
  for (auto& v : data) v = normal(gen);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i) + ":0:0");
  return coresetkit::EmbeddingMatrix(n, d, std::move(data), std::move(ids));
}

void BM_Coverage(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = Random(n, 64);
  const auto bins = coresetkit::dq::BinPartition{{[n] {
                                                   std::vector<std::size_t> all(n);
                                                   for (std::size_t i = 0; i < n; ++i) all[i] = i;
                                                   return all;
                                                 }()},
                                                 n};
  const auto sel = coresetkit::dq::RandomBaselineCount(n, n / 10, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coresetkit::diversity::Coverage(m, sel, bins));
  }
}
BENCHMARK(BM_Coverage)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Project2d(benchmark::State& state) {
  const auto m = Random(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coresetkit::diversity::Project2d(m));
  }
}
BENCHMARK(BM_Project2d)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
