// Copyright 2026 The Authors.
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

#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "smi/functions.hpp"
#include "smi/greedy.hpp"
#include "smi/similarity.hpp"

namespace {

smi::EmbeddingMatrix random_embeddings(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(rows * dim);
  for (double& x : v) x = normal(rng);
  return smi::EmbeddingMatrix(rows, dim, std::move(v));
}

std::shared_ptr<const smi::SimilarityKernel> share(smi::SimilarityKernel k) {
  return std::make_shared<const smi::SimilarityKernel>(std::move(k));
}

void BM_SquareKernel(benchmark::State& state) {
  const auto e = random_embeddings(state.range(0), 330, 1);
  for (auto _ : state) benchmark::DoNotOptimize(smi::cosine_kernel(e));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SquareKernel)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_CrossKernel(benchmark::State& state) {
  const auto u = random_embeddings(state.range(0), 330, 2);
  const auto q = random_embeddings(50, 330, 3);
  for (auto _ : state) benchmark::DoNotOptimize(smi::cosine_kernel(u, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CrossKernel)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

// range(0): n, range(1): variant.
void BM_GreedyFLVMI(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto u = random_embeddings(n, 32, 4);
  const auto q = random_embeddings(20, 32, 5);
  smi::KernelBlocks b;
  b.ground = share(smi::cosine_kernel(u));
  b.ground_query = share(smi::cosine_kernel(u, q));
  const auto f = smi::make_function(smi::FunctionKind::kFLVMI, b);
  smi::GreedyConfig cfg;
  cfg.budget = 50;
  cfg.variant = static_cast<smi::GreedyVariant>(state.range(1));
  std::size_t evaluations = 0;
  for (auto _ : state) {
    const auto r = smi::greedy_select(*f, cfg);
    evaluations = r.evaluations;
    benchmark::DoNotOptimize(r.value);
  }
  state.counters["evaluations"] = static_cast<double>(evaluations);
}
BENCHMARK(BM_GreedyFLVMI)->ArgsProduct({{500, 2000}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_GreedyFLQMI(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto u = random_embeddings(n, 32, 6);
  const auto q = random_embeddings(50, 32, 7);
  smi::KernelBlocks b;
  b.ground_query = share(smi::cosine_kernel(u, q));
  const auto f = smi::make_function(smi::FunctionKind::kFLQMI, b);
  smi::GreedyConfig cfg;
  cfg.budget = 100;
  for (auto _ : state) benchmark::DoNotOptimize(smi::greedy_select(*f, cfg).value);
}
BENCHMARK(BM_GreedyFLQMI)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

// range(0): n, range(1): p.
void BM_PartitionedLogDetMI(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const auto u = random_embeddings(n, 32, 8);
  const auto q = random_embeddings(25, 32, 9);
  auto query = share(smi::regularize(smi::cosine_kernel(q), smi::kLogDetRegularization));
  smi::GreedyConfig cfg;
  cfg.budget = 100;
  cfg.partitions = state.range(1);
  cfg.variant = smi::GreedyVariant::kNaive;
  for (auto _ : state) {
    smi::FunctionParams params;
    params.cache = smi::make_conditioning_cache();
    auto factory = [&](std::span<const smi::Index> chunk) {
      const auto c = u.select(chunk);
      smi::KernelBlocks b;
      b.ground = share(smi::regularize(smi::cosine_kernel(c), smi::kLogDetRegularization));
      b.ground_query = share(smi::cosine_kernel(c, q));
      b.query = query;
      return smi::make_function(smi::FunctionKind::kLogDetMI, b, params);
    };
    benchmark::DoNotOptimize(smi::partitioned_select(n, factory, cfg).value);
  }
}
BENCHMARK(BM_PartitionedLogDetMI)
    ->Args({4000, 1})
    ->Args({4000, 4})
    ->Args({4000, 10})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
