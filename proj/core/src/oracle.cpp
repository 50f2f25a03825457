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

#include "smi/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smi {
namespace {

std::vector<Index> set_union(std::initializer_list<std::span<const Index>> parts) {
  std::vector<Index> out;
  for (auto p : parts) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

GroundTruthOracle::GroundTruthOracle(BaseFunction base, SimilarityKernel joint,
                                     std::vector<Index> represented,
                                     double gc_lambda)
    : base_(base),
      joint_(std::move(joint)),
      represented_(std::move(represented)),
      gc_lambda_(gc_lambda) {
  if (!joint_.symmetric()) {
    throw std::invalid_argument("GroundTruthOracle: joint kernel must be symmetric");
  }
  for (Index i : represented_) {
    if (i >= joint_.rows()) throw std::invalid_argument("GroundTruthOracle: index out of range");
  }
}

double GroundTruthOracle::f(std::span<const Index> set_in) const {
  const std::vector<Index> set = set_union({set_in});
  for (Index j : set) {
    if (j >= joint_.rows()) throw std::invalid_argument("GroundTruthOracle: index out of range");
  }
  switch (base_) {
    case BaseFunction::kFacilityLocation: {
      double total = 0.0;
      for (Index i : represented_) {
        double m = 0.0;
        for (Index j : set) m = std::max(m, joint_(i, j));
        total += m;
      }
      return total;
    }
    case BaseFunction::kGraphCut: {
      double coverage = 0.0;
      for (Index i : represented_) {
        for (Index j : set) coverage += joint_(i, j);
      }
      double internal = 0.0;
      for (Index i : set) {
        for (Index j : set) internal += joint_(i, j);
      }
      return coverage - gc_lambda_ * internal;
    }
    case BaseFunction::kLogDet: {
      if (set.empty()) return 0.0;
      Eigen::MatrixXd m(set.size(), set.size());
      for (std::size_t r = 0; r < set.size(); ++r) {
        for (std::size_t c = 0; c < set.size(); ++c) m(r, c) = joint_(set[r], set[c]);
      }
      // Full-pivot LU: accurate enough for reference use, no PD assumption.
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      const double det = lu.determinant();
      if (det <= 0.0) return -std::numeric_limits<double>::infinity();
      return lu.matrixLU().diagonal().array().abs().log().sum();
    }
  }
  return 0.0;
}

double GroundTruthOracle::mutual_information(std::span<const Index> a,
                                             std::span<const Index> q) const {
  return f(a) + f(q) - f(set_union({a, q}));
}

double GroundTruthOracle::conditional_gain(std::span<const Index> a,
                                           std::span<const Index> p) const {
  return f(set_union({a, p})) - f(p);
}

double GroundTruthOracle::conditional_mutual_information(
    std::span<const Index> a, std::span<const Index> q,
    std::span<const Index> p) const {
  return f(set_union({a, p})) + f(set_union({q, p})) - f(set_union({a, q, p})) - f(p);
}

}  // namespace smi
