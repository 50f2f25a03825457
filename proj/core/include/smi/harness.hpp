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

#ifndef SMI_HARNESS_HPP_
#define SMI_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smi/greedy.hpp"
#include "smi/penalty.hpp"
#include "smi/scenarios.hpp"
#include "smi/surrogate.hpp"

namespace smi {

struct OptimizerConfig {
  // "auto", "naive", "lazy" or "stochastic".
  std::string variant = "auto";
  double epsilon = 0.01;
  // 0 picks one chunk per ~chunk_size points for kinds that need the square
  // ground kernel, and a single chunk otherwise.
  std::size_t partitions = 0;
  std::size_t chunk_size = 15000;
  std::size_t threads = 0;
  bool stop_on_negative = false;
};

struct RunConfig {
  ScenarioParams scenario;
  // A function kind ("FLQMI") or a baseline ("RANDOM", "ENTROPY", ...).
  std::string method = "RANDOM";
  // Optional overrides of the scenario's query and conditioning sources.
  std::optional<QuerySource> query;
  std::optional<CondSource> cond;
  int rounds = 5;
  std::size_t budget = 125;
  OptimizerConfig optimizer;
  TrainConfig model;
  double gc_lambda = 1.0;
  double eta = 1.0;
  double logdet_epsilon = kLogDetRegularization;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
  // External data instead of generated blobs.
  std::optional<std::filesystem::path> dataset_csv;
  std::optional<std::filesystem::path> split_csv;
};

// JSON with the RunConfig field names; unknown keys are rejected. Throws
// ConfigError.
RunConfig parse_run_config(std::string_view json_text);
std::string run_config_json(const RunConfig& config);
// Throws ConfigError for an invalid config; checks B * N <= |U| on `split`.
void validate_run_config(const RunConfig& config, const ScenarioSplit& split);

struct RoundRecord {
  int round = 0;
  std::size_t labeled_size = 0;
  double accuracy = 0.0;
  std::optional<double> rare_accuracy;
  std::size_t rare_selected = 0;
  // Distinct originals among all points selected so far.
  std::size_t unique_selected = 0;
  std::optional<std::size_t> id_selected;
  std::vector<PointId> selected_ids;
  std::optional<double> objective;
  std::size_t evaluations = 0;
  std::size_t numerical_warnings = 0;
};

struct RoundTiming {
  double select_seconds = 0.0;
  double train_seconds = 0.0;
};

struct RunResult {
  std::vector<RoundRecord> records;
  std::vector<RoundTiming> timings;
  SurrogateModel final_model;
  double initial_accuracy = 0.0;
  std::optional<double> initial_rare_accuracy;
  std::size_t guard_violations = 0;
  std::string optimizer;
  std::size_t partitions = 1;
  std::vector<std::string> warnings;
};

// Test accuracy (argmax over the ID classes) and mean per-rare-class
// accuracy. Absent rare accuracy when the split has no rare classes.
std::pair<double, std::optional<double>> test_accuracy(const SurrogateModel& model,
                                                       const ScenarioSplit& split,
                                                       const Blobs& test);

// Selection counts for one round; `cumulative` holds every point selected so
// far, this round included.
RoundRecord compute_metrics(const SurrogateModel& model, const ScenarioSplit& split,
                            const Blobs& test, std::span<const Index> selected,
                            std::span<const Index> cumulative);

using RoundCallback = std::function<void(const RoundRecord&)>;

// Runs the active-learning rounds. Errors carry the round in their message.
RunResult run_al(const RunConfig& config, const RoundCallback& on_round = {});
RunResult run_al(const RunConfig& config, ScenarioSplit split,
                 const RoundCallback& on_round = {});

ScenarioSplit make_split(const RunConfig& config);

// The kernel the first round selects on: U x U when the method reads the
// ground block (baselines included), otherwise U x Q.
SimilarityKernel initial_kernel(const RunConfig& config);

std::string round_record_json(const RoundRecord& record);
std::string summary_json(const RunConfig& config, const RunResult& result,
                         double elapsed_seconds);

}  // namespace smi

#endif  // SMI_HARNESS_HPP_
