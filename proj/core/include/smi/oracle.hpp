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

#ifndef SMI_ORACLE_HPP_
#define SMI_ORACLE_HPP_

#include <span>
#include <vector>

#include "smi/similarity.hpp"

namespace smi {

enum class BaseFunction { kFacilityLocation, kGraphCut, kLogDet };

// Information measures computed purely by set arithmetic on a base function
// over a joint ground set V (all indices refer to the joint kernel):
//
//   I(A; Q)     = f(A) + f(Q) - f(A u Q)
//   f(A | P)    = f(A u P) - f(P)
//   I(A; Q | P) = f(A u P) + f(Q u P) - f(A u Q u P) - f(P)
//
// FL and GC sum their coverage over `represented` (the unlabeled rows);
// LogDet is log det of the joint kernel restricted to the set. Brute force by
// construction: use as a reference, not in production loops.
class GroundTruthOracle {
 public:
  GroundTruthOracle(BaseFunction base, SimilarityKernel joint,
                    std::vector<Index> represented, double gc_lambda = 1.0);

  double f(std::span<const Index> set) const;
  double mutual_information(std::span<const Index> a, std::span<const Index> q) const;
  double conditional_gain(std::span<const Index> a, std::span<const Index> p) const;
  double conditional_mutual_information(std::span<const Index> a,
                                        std::span<const Index> q,
                                        std::span<const Index> p) const;

 private:
  BaseFunction base_;
  SimilarityKernel joint_;
  std::vector<Index> represented_;
  double gc_lambda_;
};

}  // namespace smi

#endif  // SMI_ORACLE_HPP_
