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

// Brute-force suites that compare the closed forms and the greedy
// maximizers against set-arithmetic oracles and exhaustive search.

#ifndef SMI_VERIFY_HPP_
#define SMI_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "smi/functions.hpp"
#include "smi/oracle.hpp"

namespace smi {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  std::size_t comparisons = 0;
  double max_error = 0.0;
  double seconds = 0.0;
};

// A random joint kernel over disjoint U, Q and P (in that order) plus its
// regularized twin for the log-determinant kinds.
struct RandomInstance {
  SimilarityKernel joint;
  SimilarityKernel joint_reg;
  std::vector<Index> u, q, p;
  double gc_lambda = 1.0;
  double eta = 1.0;
};

RandomInstance make_random_instance(std::size_t n, std::size_t nq, std::size_t np,
                                    std::uint64_t seed);

// Value of `kind` on A (indices into U) computed only from oracle set
// arithmetic over the joint kernel.
double definitional_value(FunctionKind kind, const RandomInstance& inst,
                          std::span<const Index> a);

// Closed form == definitional composite on every subset of U, for every
// kind, over `instances` kernels with n <= max_n and |Q|, |P| <= 3.
CheckResult check_oracle_equivalence(int instances, std::size_t max_n, std::uint64_t seed);

// The Q <- U and P <- {} substitutions, exhaustively over subsets of size-n
// ground sets.
CheckResult check_reductions(int instances, std::size_t n, std::uint64_t seed);

// Naive greedy >= (1 - 1/e) * optimum and lazy bit-identical to naive, on
// monotone instances (FLVMI, FLQMI, GCMI, FLCG).
CheckResult check_greedy_bound(int instances, std::size_t n, std::size_t budget,
                               std::uint64_t seed);

// Committed gains sum to evaluate() along random orders, for every kind.
CheckResult check_incremental(int instances, std::size_t n, std::uint64_t seed);

// Diminishing returns on random nested pairs for every kind flagged
// submodular.
CheckResult check_submodularity(int instances, std::size_t n, std::uint64_t seed);

std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed);

}  // namespace smi

#endif  // SMI_VERIFY_HPP_
