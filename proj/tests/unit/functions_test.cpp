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

#include "smi/functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "smi/errors.hpp"
#include "smi/oracle.hpp"
#include "smi/verify.hpp"
#include "test_util.hpp"

namespace smi {
namespace {

using testing::k3_blocks;

double value_on_k3(FunctionKind kind, std::vector<Index> a) {
  return make_function(kind, k3_blocks())->evaluate(a);
}

TEST(K3, ClosedForms) {
  EXPECT_NEAR(value_on_k3(FunctionKind::kFLVMI, {0}), 0.8, 1e-12);
  EXPECT_NEAR(value_on_k3(FunctionKind::kGCMI, {0}), 0.4, 1e-12);
  EXPECT_NEAR(value_on_k3(FunctionKind::kLogDetMI, {0}), -std::log(0.96), 1e-12);
  EXPECT_NEAR(value_on_k3(FunctionKind::kFLCG, {0}), 0.5, 1e-12);
  EXPECT_NEAR(value_on_k3(FunctionKind::kLogDetCG, {0}), std::log(0.75), 1e-12);
  EXPECT_NEAR(value_on_k3(FunctionKind::kGCCG, {0}), -0.3, 1e-12);
  EXPECT_NEAR(value_on_k3(FunctionKind::kFLCMI, {0}), 0.0, 1e-12);
}

TEST(K3, EmptySetIsZeroForEveryKind) {
  for (FunctionKind kind : all_function_kinds()) {
    EXPECT_EQ(value_on_k3(kind, {}), 0.0) << to_string(kind);
  }
}

TEST(K3, GainsFromState) {
  const auto flvmi = make_function(FunctionKind::kFLVMI, k3_blocks());
  SelectionState s = flvmi->make_state();
  EXPECT_NEAR(flvmi->gain(s, 0), 0.8, 1e-12);

  const auto gcmi = make_function(FunctionKind::kGCMI, k3_blocks());
  SelectionState g = gcmi->make_state();
  const double before = gcmi->gain(g, 2);
  gcmi->commit(g, 0);
  gcmi->commit(g, 1);
  EXPECT_DOUBLE_EQ(gcmi->gain(g, 2), before);
  EXPECT_NEAR(before, 2.0 * 1.0, 1e-12);

  const auto mi = make_function(FunctionKind::kLogDetMI, k3_blocks());
  SelectionState m = mi->make_state();
  mi->commit(m, 0);
  const std::vector<Index> a01 = {0, 1}, a0 = {0};
  EXPECT_NEAR(mi->gain(m, 1), mi->evaluate(a01) - mi->evaluate(a0), 1e-12);
}

TEST(Commit, DuplicateAndRangeRejected) {
  const auto f = make_function(FunctionKind::kFLVMI, k3_blocks());
  SelectionState s = f->make_state();
  f->commit(s, 1);
  EXPECT_THROW(f->commit(s, 1), std::invalid_argument);
  EXPECT_THROW(f->gain(s, 1), std::invalid_argument);
  EXPECT_THROW(f->commit(s, 3), std::invalid_argument);
  const std::vector<Index> repeated = {0, 0};
  EXPECT_THROW(f->evaluate(repeated), std::invalid_argument);
}

TEST(Commit, RandomSequencesReproduceEvaluate) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const RandomInstance inst = make_random_instance(16, 3, 3, 100 + trial);
    for (FunctionKind kind : all_function_kinds()) {
      const SimilarityKernel& joint = is_log_det(kind) ? inst.joint_reg : inst.joint;
      FunctionParams params;
      params.gc_lambda = inst.gc_lambda;
      params.eta = inst.eta;
      const auto f =
          make_function(kind, KernelBlocks::from_joint(joint, inst.u, inst.q, inst.p), params);
      std::vector<Index> order = testing::range(0, 16);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(1 + trial % 8);
      SelectionState s = f->make_state();
      for (Index x : order) f->commit(s, x);
      const double ref = f->evaluate(order);
      ASSERT_NEAR(s.value(), ref, 1e-9 * std::max(1.0, std::abs(ref))) << to_string(kind);
    }
  }
}

TEST(Commit, FullFacilityLocationSet) {
  const RandomInstance inst = make_random_instance(10, 0, 0, 4);
  const auto f = make_function(FunctionKind::kFL,
                               KernelBlocks::from_joint(inst.joint, inst.u, inst.q, inst.p));
  SelectionState s = f->make_state();
  for (Index x = 0; x < 10; ++x) f->commit(s, x);
  double expected = 0.0;
  for (Index i = 0; i < 10; ++i) {
    double best = 0.0;
    for (Index j = 0; j < 10; ++j) best = std::max(best, inst.joint(i, j));
    expected += best;
  }
  EXPECT_NEAR(s.value(), expected, 1e-12);
}

TEST(Oracle, ClosedFormsMatchDefinitions) {
  const CheckResult r = check_oracle_equivalence(10, 7, 77);
  EXPECT_TRUE(r.passed) << r.detail;
  EXPECT_GT(r.comparisons, 0u);
}

TEST(Oracle, DefinitionalK3) {
  const GroundTruthOracle fl(BaseFunction::kFacilityLocation, testing::k3(), {0, 1, 2});
  const std::vector<Index> a = {0}, q = {2}, p = {1};
  EXPECT_NEAR(fl.mutual_information(a, q), 0.8, 1e-12);
  EXPECT_NEAR(fl.conditional_gain(a, p), 0.5, 1e-12);
  EXPECT_NEAR(fl.conditional_mutual_information(a, q, p), 0.0, 1e-12);
  const GroundTruthOracle gc(BaseFunction::kGraphCut, testing::k3(), {0, 1, 2});
  EXPECT_NEAR(gc.mutual_information(a, q), 0.4, 1e-12);
  EXPECT_NEAR(gc.conditional_gain(a, p), -0.3, 1e-12);
  const GroundTruthOracle ld(BaseFunction::kLogDet, testing::k3(), {0, 1, 2});
  EXPECT_NEAR(ld.mutual_information(a, q), -std::log(0.96), 1e-12);
  EXPECT_NEAR(ld.conditional_gain(a, p), std::log(0.75), 1e-12);
}

TEST(Reductions, ExhaustiveOnEightPoints) {
  const CheckResult r = check_reductions(5, 8, 31);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Reductions, ReducedKinds) {
  EXPECT_EQ(reduced_kind(FunctionKind::kFLCMI, true, true), FunctionKind::kFL);
  EXPECT_EQ(reduced_kind(FunctionKind::kFLCMI, false, true), FunctionKind::kFLVMI);
  EXPECT_EQ(reduced_kind(FunctionKind::kFLCMI, true, false), FunctionKind::kFLCG);
  EXPECT_EQ(reduced_kind(FunctionKind::kFLCMI, false, false), FunctionKind::kFLCMI);
  EXPECT_EQ(reduced_kind(FunctionKind::kLogDetCMI, true, true), FunctionKind::kLogDet);
  EXPECT_EQ(reduced_kind(FunctionKind::kLogDetCMI, false, true), FunctionKind::kLogDetMI);
  EXPECT_EQ(reduced_kind(FunctionKind::kLogDetCMI, true, false), FunctionKind::kLogDetCG);
  EXPECT_THROW(reduce_scmi(FunctionKind::kFLVMI, true, true, k3_blocks()),
               std::invalid_argument);
}

TEST(Reductions, LogDetCmiWithoutConditioningIsMi) {
  const RandomInstance inst = make_random_instance(8, 3, 0, 9);
  const KernelBlocks b = KernelBlocks::from_joint(inst.joint_reg, inst.u, inst.q, inst.p);
  const auto cmi = make_function(FunctionKind::kLogDetCMI, b);
  const auto mi = make_function(FunctionKind::kLogDetMI, b);
  for (unsigned mask = 0; mask < 256; ++mask) {
    std::vector<Index> a;
    for (Index i = 0; i < 8; ++i) {
      if (mask & (1u << i)) a.push_back(i);
    }
    const double ref = mi->evaluate(a);
    ASSERT_NEAR(cmi->evaluate(a), ref, 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST(LogDet, SingularQueryRejected) {
  // Two identical query points and no regularization.
  const SimilarityKernel joint(3, 3, {1, .3, .3, .3, 1, 1, .3, 1, 1}, true, {0, 1, 2},
                               {0, 1, 2});
  const std::vector<Index> u = {0}, q = {1, 2}, p = {};
  const KernelBlocks b = KernelBlocks::from_joint(joint, u, q, p);
  EXPECT_THROW(
      {
        const auto f = make_function(FunctionKind::kLogDetMI, b);
        const std::vector<Index> a = {0};
        f->evaluate(a);
      },
      NumericalError);
}

TEST(Kinds, NamesRoundTrip) {
  for (FunctionKind kind : all_function_kinds()) {
    EXPECT_EQ(parse_function_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_function_kind("flqmi"), FunctionKind::kFLQMI);
  EXPECT_FALSE(parse_function_kind("nope").has_value());
  EXPECT_FALSE(is_submodular(FunctionKind::kLogDetMI));
  EXPECT_TRUE(is_submodular(FunctionKind::kFLVMI));
}

TEST(Kinds, MissingBlockRejected) {
  KernelBlocks b;
  EXPECT_THROW(make_function(FunctionKind::kFLVMI, b), std::invalid_argument);
}

TEST(Properties, Submodularity) {
  const CheckResult r = check_submodularity(10, 10, 3);
  EXPECT_TRUE(r.passed) << r.detail;
}

}  // namespace
}  // namespace smi
