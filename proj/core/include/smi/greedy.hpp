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

#ifndef SMI_GREEDY_HPP_
#define SMI_GREEDY_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smi/functions.hpp"

namespace smi {

enum class GreedyVariant { kNaive, kLazy, kStochastic };

std::string_view to_string(GreedyVariant v);
std::optional<GreedyVariant> parse_greedy_variant(std::string_view name);

struct GreedyConfig {
  std::size_t budget = 1;
  GreedyVariant variant = GreedyVariant::kLazy;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  std::size_t partitions = 1;
  // Stop as soon as the best available gain is negative.
  bool stop_on_negative = false;
  // Worker threads for partitioned_select; 0 uses the hardware count.
  std::size_t threads = 0;
};

struct SelectionResult {
  std::vector<Index> chosen;
  std::vector<double> gains;
  double value = 0.0;
  std::size_t evaluations = 0;
  double elapsed_seconds = 0.0;
  std::size_t numerical_warnings = 0;
  std::vector<std::string> warnings;
};

// s = ceil((n / B) * ln(1 / epsilon)), capped at n.
std::size_t stochastic_sample_size(std::size_t n, std::size_t budget, double epsilon);

// floor(B/p) each, the first B mod p chunks one more.
std::vector<std::size_t> partition_quotas(std::size_t budget, std::size_t partitions);

inline constexpr std::size_t kStochasticThreshold = 20000;

// Stochastic above kStochasticThreshold candidates, naive for kinds that are
// not submodular (lazy bounds would be wrong), lazy otherwise.
GreedyVariant auto_greedy_variant(FunctionKind kind, std::size_t candidates);

// Throws std::invalid_argument for a zero budget or epsilon outside (0, 1).
// A budget above the ground size selects everything and records a warning.
SelectionResult greedy_select(const InfoFunction& f, const GreedyConfig& cfg);

// Builds the function for one chunk; `chunk` holds ascending ground indices.
using ChunkFactory =
    std::function<std::shared_ptr<const InfoFunction>(std::span<const Index> chunk)>;

// Seeded random split of 0..n-1 into cfg.partitions chunks, greedy on each
// with its quota (chunk c uses seed + c), results merged in chunk order with
// indices mapped back to the ground set. `value` is the sum of the chunk
// objectives.
SelectionResult partitioned_select(std::size_t ground_size, const ChunkFactory& factory,
                                   const GreedyConfig& cfg);

// Largest evaluate() over all B-subsets, lexicographically first on ties.
// Rejects instances with more than 1e6 subsets.
SelectionResult exhaustive_opt(const InfoFunction& f, std::size_t budget);

}  // namespace smi

#endif  // SMI_GREEDY_HPP_
