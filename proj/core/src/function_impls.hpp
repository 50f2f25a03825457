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

// Internal factories, one per function family. Block presence and shapes are
// validated by make_function() before these run.

#ifndef SMI_SRC_FUNCTION_IMPLS_HPP_
#define SMI_SRC_FUNCTION_IMPLS_HPP_

#include <memory>
#include <span>

#include "smi/functions.hpp"

namespace smi::detail {

std::shared_ptr<const InfoFunction> make_facility_location(FunctionKind kind,
                                                           const KernelBlocks& b);
std::shared_ptr<const InfoFunction> make_query_facility_location(const KernelBlocks& b);
std::shared_ptr<const InfoFunction> make_div_gcmi(const KernelBlocks& b,
                                                  double lambda, double eta);
std::shared_ptr<const InfoFunction> make_graph_cut(FunctionKind kind,
                                                   const KernelBlocks& b,
                                                   double lambda);
std::shared_ptr<const InfoFunction> make_log_det(FunctionKind kind,
                                                 const KernelBlocks& b,
                                                 const std::shared_ptr<ConditioningCache>& cache);

// max_{j in cols} k(i, j) per row, 0 for an empty column set.
std::vector<double> row_max(const SimilarityKernel& k);

}  // namespace smi::detail

#endif  // SMI_SRC_FUNCTION_IMPLS_HPP_
