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

#ifndef SMI_TESTS_UNIT_TEST_UTIL_HPP_
#define SMI_TESTS_UNIT_TEST_UTIL_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "smi/functions.hpp"
#include "smi/similarity.hpp"

namespace smi::testing {

// [[1,.5,.2],[.5,1,.4],[.2,.4,1]] over ids 0..2.
inline SimilarityKernel k3() {
  return SimilarityKernel(3, 3, {1, .5, .2, .5, 1, .4, .2, .4, 1}, true, {0, 1, 2},
                          {0, 1, 2});
}

// U = {0,1,2}, Q = {2}, P = {1}, all taken from K3.
inline KernelBlocks k3_blocks() {
  const std::vector<Index> u = {0, 1, 2}, q = {2}, p = {1};
  return KernelBlocks::from_joint(k3(), u, q, p);
}

inline EmbeddingMatrix random_embedding(std::size_t n, std::size_t d, std::uint64_t seed,
                                        PointId first_id = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n * d);
  for (double& x : v) x = normal(rng);
  std::vector<PointId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = first_id + static_cast<PointId>(i);
  return EmbeddingMatrix(n, d, std::move(v), std::move(ids));
}

inline std::vector<Index> range(std::size_t begin, std::size_t end) {
  std::vector<Index> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

}  // namespace smi::testing

#endif  // SMI_TESTS_UNIT_TEST_UTIL_HPP_
