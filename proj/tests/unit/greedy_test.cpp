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

#include "smi/greedy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "smi/verify.hpp"
#include "test_util.hpp"

namespace smi {
namespace {

// GCMI over one query column: gain of x is 2 * s[x], independent of A.
std::shared_ptr<const InfoFunction> modular(std::vector<double> half_weights) {
  const std::size_t n = half_weights.size();
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), PointId{0});
  KernelBlocks b;
  b.ground_query = std::make_shared<const SimilarityKernel>(
      n, 1, std::move(half_weights), false, std::move(ids),
      std::vector<PointId>{static_cast<PointId>(n)});
  return make_function(FunctionKind::kGCMI, b);
}

std::shared_ptr<const InfoFunction> random_flvmi(std::size_t n, std::uint64_t seed) {
  const RandomInstance inst = make_random_instance(n, 3, 0, seed);
  return make_function(FunctionKind::kFLVMI,
                       KernelBlocks::from_joint(inst.joint, inst.u, inst.q, inst.p));
}

TEST(Greedy, ModularIsTopB) {
  const auto f = modular({1.5, 0.5, 1.0});
  for (GreedyVariant v : {GreedyVariant::kNaive, GreedyVariant::kLazy}) {
    GreedyConfig c;
    c.budget = 2;
    c.variant = v;
    const SelectionResult r = greedy_select(*f, c);
    EXPECT_EQ(r.chosen, (std::vector<Index>{0, 2}));
    EXPECT_NEAR(r.value, 5.0, 1e-12);
    EXPECT_EQ(r.gains.size(), 2u);
  }
}

TEST(Greedy, NaiveAndLazyAgreeOnK3) {
  const auto f = make_function(FunctionKind::kFLVMI, testing::k3_blocks());
  GreedyConfig c;
  c.budget = 2;
  c.variant = GreedyVariant::kNaive;
  const SelectionResult naive = greedy_select(*f, c);
  c.variant = GreedyVariant::kLazy;
  const SelectionResult lazy = greedy_select(*f, c);
  EXPECT_EQ(naive.chosen, lazy.chosen);
  EXPECT_EQ(naive.value, lazy.value);
}

TEST(Greedy, LazyUsesFewerEvaluations) {
  const auto f = random_flvmi(200, 12);
  GreedyConfig c;
  c.budget = 20;
  c.variant = GreedyVariant::kNaive;
  const SelectionResult naive = greedy_select(*f, c);
  c.variant = GreedyVariant::kLazy;
  const SelectionResult lazy = greedy_select(*f, c);
  EXPECT_EQ(naive.chosen, lazy.chosen);
  EXPECT_LT(lazy.evaluations, naive.evaluations);
}

TEST(Greedy, BudgetEdgeCases) {
  const auto f = modular({1, 2, 3});
  GreedyConfig c;
  c.budget = 0;
  EXPECT_THROW(greedy_select(*f, c), std::invalid_argument);
  c.budget = 5;
  const SelectionResult r = greedy_select(*f, c);
  EXPECT_EQ(r.chosen.size(), 3u);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Greedy, StopOnNegative) {
  const auto f = make_function(FunctionKind::kGCCG, testing::k3_blocks());
  GreedyConfig c;
  c.budget = 3;
  c.variant = GreedyVariant::kNaive;
  c.stop_on_negative = true;
  const SelectionResult r = greedy_select(*f, c);
  for (double g : r.gains) EXPECT_GE(g, 0.0);
}

TEST(Greedy, ApproximationBoundAndLazyIdentity) {
  const CheckResult r = check_greedy_bound(30, 10, 3, 8);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Stochastic, SampleSize) {
  EXPECT_EQ(stochastic_sample_size(1000, 10, 0.01), 461u);
  EXPECT_EQ(stochastic_sample_size(10, 1, 0.01), 10u);
}

TEST(Stochastic, DeterministicPerSeed) {
  const auto f = random_flvmi(300, 2);
  GreedyConfig c;
  c.budget = 10;
  c.variant = GreedyVariant::kStochastic;
  c.seed = 4;
  const SelectionResult a = greedy_select(*f, c);
  const SelectionResult b = greedy_select(*f, c);
  EXPECT_EQ(a.chosen, b.chosen);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Partition, Quotas) {
  EXPECT_EQ(partition_quotas(7, 3), (std::vector<std::size_t>{3, 2, 2}));
  const std::vector<std::size_t> big = partition_quotas(25000, 50);
  ASSERT_EQ(big.size(), 50u);
  for (std::size_t q : big) EXPECT_EQ(q, 500u);
}

TEST(Partition, SingleChunkMatchesGreedy) {
  const RandomInstance inst = make_random_instance(60, 3, 0, 21);
  const KernelBlocks all = KernelBlocks::from_joint(inst.joint, inst.u, inst.q, inst.p);
  const auto f = make_function(FunctionKind::kFLVMI, all);
  GreedyConfig c;
  c.budget = 6;
  const SelectionResult direct = greedy_select(*f, c);
  ChunkFactory factory = [&](std::span<const Index> chunk) {
    std::vector<Index> u(chunk.begin(), chunk.end());
    return make_function(FunctionKind::kFLVMI,
                         KernelBlocks::from_joint(inst.joint, u, inst.q, inst.p));
  };
  const SelectionResult part = partitioned_select(60, factory, c);
  EXPECT_EQ(part.chosen, direct.chosen);
  EXPECT_NEAR(part.value, direct.value, 1e-12);
}

TEST(Partition, ReturnsExactBudgetOfDistinctIndices) {
  const RandomInstance inst = make_random_instance(90, 3, 0, 22);
  ChunkFactory factory = [&](std::span<const Index> chunk) {
    std::vector<Index> u(chunk.begin(), chunk.end());
    return make_function(FunctionKind::kFLVMI,
                         KernelBlocks::from_joint(inst.joint, u, inst.q, inst.p));
  };
  GreedyConfig c;
  c.budget = 10;
  c.partitions = 4;
  c.seed = 3;
  const SelectionResult r = partitioned_select(90, factory, c);
  ASSERT_EQ(r.chosen.size(), 10u);
  std::vector<Index> sorted = r.chosen;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  EXPECT_LT(sorted.back(), 90u);
  c.threads = 3;
  EXPECT_EQ(partitioned_select(90, factory, c).chosen, r.chosen);
  c.partitions = 11;
  EXPECT_THROW(partitioned_select(90, factory, c), std::invalid_argument);
}

TEST(Exhaustive, Basics) {
  const auto f = modular({0.2, 0.9, 0.4, 0.7});
  const SelectionResult r = exhaustive_opt(*f, 2);
  std::vector<Index> chosen = r.chosen;
  std::sort(chosen.begin(), chosen.end());
  EXPECT_EQ(chosen, (std::vector<Index>{1, 3}));
  const auto g = modular({0.1, 0.2, 0.3});
  EXPECT_EQ(exhaustive_opt(*g, 3).chosen.size(), 3u);
  EXPECT_THROW(exhaustive_opt(*random_flvmi(60, 1), 10), std::invalid_argument);
}

TEST(Exhaustive, OptimumDominatesGreedy) {
  const auto f = random_flvmi(12, 99);
  GreedyConfig c;
  c.budget = 3;
  EXPECT_GE(exhaustive_opt(*f, 3).value + 1e-12, greedy_select(*f, c).value);
}

TEST(Variant, Names) {
  for (GreedyVariant v :
       {GreedyVariant::kNaive, GreedyVariant::kLazy, GreedyVariant::kStochastic}) {
    EXPECT_EQ(parse_greedy_variant(to_string(v)), v);
  }
  EXPECT_FALSE(parse_greedy_variant("greedy?").has_value());
}

TEST(Variant, AutoChoice) {
  EXPECT_EQ(auto_greedy_variant(FunctionKind::kFL, 1000), GreedyVariant::kLazy);
  EXPECT_EQ(auto_greedy_variant(FunctionKind::kLogDetCG, kStochasticThreshold),
            GreedyVariant::kLazy);
  EXPECT_EQ(auto_greedy_variant(FunctionKind::kLogDetMI, 1000), GreedyVariant::kNaive);
  EXPECT_EQ(auto_greedy_variant(FunctionKind::kLogDetCMI, 1000), GreedyVariant::kNaive);
  EXPECT_EQ(auto_greedy_variant(FunctionKind::kFLQMI, kStochasticThreshold + 1),
            GreedyVariant::kStochastic);
  EXPECT_EQ(auto_greedy_variant(FunctionKind::kLogDetMI, kStochasticThreshold + 1),
            GreedyVariant::kStochastic);
}

}  // namespace
}  // namespace smi
