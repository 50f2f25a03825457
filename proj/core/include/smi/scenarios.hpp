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

#ifndef SMI_SCENARIOS_HPP_
#define SMI_SCENARIOS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smi/functions.hpp"
#include "smi/surrogate.hpp"

namespace smi {

struct BlobModel {
  Eigen::MatrixXd means;  // classes x dim
  double spread = 1.0;
};

struct Blobs {
  Features x;
  std::vector<int> labels;
};

// Class means drawn uniformly on the sphere of radius 4 * spread.
BlobModel make_blob_model(int classes, int dim, double spread, std::uint64_t seed);
// counts[k] points around mean k with isotropic N(0, spread^2) noise, in
// class order.
Blobs sample_blobs(const BlobModel& model, std::span<const int> counts, std::uint64_t seed);
Blobs make_blobs(int classes, std::span<const int> counts, int dim, double spread,
                 std::uint64_t seed);

enum class ScenarioKind { kStandard, kRare, kRedundancy, kOod };
std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

enum class Role : std::uint8_t { kLabeled, kUnlabeled, kRareQuery, kValidation };
std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view name);

struct ScenarioParams {
  ScenarioKind kind = ScenarioKind::kStandard;
  int classes = 10;
  int dim = 32;
  double spread = 1.0;
  // The dataset (class means, points, test set, which classes are rare) comes
  // from data_seed; which drawn points land in which role, and which are
  // duplicated, comes from seed.
  std::uint64_t data_seed = 0;
  std::uint64_t seed = 0;
  int valid_per_class = 5;

  // Standard.
  int labeled_per_class = 20;
  int unlabeled_per_class = 500;

  // Rare classes: half the classes, chosen by data_seed, are rare.
  double rho = 20.0;
  int labeled_per_common = 22;
  int labeled_per_rare = 3;
  int unlabeled_per_common = 3000;
  int rare_query_per_class = 5;

  // Redundancy.
  int unique_unlabeled = 5000;
  double dup_fraction = 0.2;
  int redundancy_factor = 10;
  int redundancy_labeled_per_class = 50;

  // Out of distribution: the first id_classes classes are ID, the rest OOD.
  int id_classes = 8;
  int ood_labeled_per_id = 200;
  int ood_valid_per_id = 5;
  int ood_unlabeled_per_id = 500;
  int ood_unlabeled_per_ood = 5000;

  int test_per_class = 500;
};

namespace detail {
struct SplitAccess;
}  // namespace detail

// The pool of all points with their roles. Ground-truth labels sit behind
// label(); reading one for a point currently in U is counted as a violation.
class ScenarioSplit {
 public:
  ScenarioKind kind() const { return kind_; }
  const Features& features() const { return features_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<PointId>& ids() const { return ids_; }

  const std::vector<Index>& labeled() const { return labeled_; }
  const std::vector<Index>& unlabeled() const { return unlabeled_; }
  const std::vector<Index>& rare_query() const { return rare_query_; }
  const std::vector<Index>& validation() const { return validation_; }
  const std::vector<Index>& id_set() const { return id_set_; }
  const std::vector<Index>& ood_set() const { return ood_set_; }
  Role role(Index i) const { return roles_[i]; }

  // Original point of each point; identity outside the redundancy scenario.
  const std::vector<Index>& duplication_map() const { return duplication_map_; }
  const std::vector<int>& rare_classes() const { return rare_classes_; }
  const std::vector<int>& ood_classes() const { return ood_classes_; }
  bool is_rare_class(int c) const;
  bool is_ood_class(int c) const;
  int data_classes() const { return data_classes_; }
  // Classes the surrogate predicts: ID classes plus one OOD class when OOD
  // classes exist, otherwise the data classes.
  int model_classes() const;
  int ood_label() const { return ood_classes_.empty() ? -1 : id_class_count(); }
  int id_class_count() const { return data_classes_ - static_cast<int>(ood_classes_.size()); }
  double rho() const { return rho_; }
  int redundancy_factor() const { return redundancy_factor_; }
  const BlobModel& blob_model() const { return blob_model_; }

  // Ground-truth data class of point i.
  int label(Index i) const;
  // Class used to train the surrogate (OOD data classes collapse to the OOD
  // class).
  int model_label(Index i) const;
  std::size_t guard_violations() const { return guard_violations_; }

  // Moves `a` from U to L. Throws std::invalid_argument if any point is not
  // in U or is repeated.
  void reveal(std::span<const Index> a);

  // Held-out balanced test draw over the ID classes, fixed by the scenario
  // seed. Splits read from CSV have no generator and return V instead.
  Blobs test_set(int per_class) const;

 private:
  friend struct detail::SplitAccess;
  friend ScenarioSplit split_from_tables(const Blobs&, std::span<const PointId>,
                                         std::span<const Role>);
  friend ScenarioSplit update_ood_sets(const ScenarioSplit& split, std::span<const Index> a);
  void assign(std::vector<Role> roles);

  ScenarioKind kind_ = ScenarioKind::kStandard;
  Features features_;
  std::vector<int> labels_;
  std::vector<PointId> ids_;
  std::vector<Role> roles_;
  std::vector<Index> labeled_, unlabeled_, rare_query_, validation_;
  std::vector<Index> id_set_, ood_set_;
  std::vector<Index> duplication_map_;
  std::vector<int> rare_classes_, ood_classes_;
  int data_classes_ = 0;
  double rho_ = 1.0;
  int redundancy_factor_ = 1;
  BlobModel blob_model_;
  std::uint64_t test_seed_ = 0;
  bool external_ = false;
  mutable std::size_t guard_violations_ = 0;
};

// Validates the parameters of params.kind and builds the split. Point order
// is a seeded shuffle of the whole pool.
ScenarioSplit build_split(const ScenarioParams& params);

ScenarioSplit build_standard_split(ScenarioParams params);
ScenarioSplit build_rare_split(ScenarioParams params);
ScenarioSplit build_redundant_split(ScenarioParams params);
ScenarioSplit build_ood_split(ScenarioParams params);

// I <- I u (A n ID), O <- O u (A n OOD), A moved from U to L.
ScenarioSplit update_ood_sets(const ScenarioSplit& split, std::span<const Index> a);

enum class QuerySource { kNone, kRareSet, kLabeledId, kFullUnlabeled };
enum class CondSource { kNone, kLabeled, kLabeledOod };
std::string_view to_string(QuerySource s);
std::string_view to_string(CondSource s);

struct AcquisitionSpec {
  FunctionKind kind = FunctionKind::kFL;
  QuerySource query = QuerySource::kFullUnlabeled;
  CondSource cond = CondSource::kNone;
};

// Throws ConfigError when the sources do not fit the kind's family.
void validate(const AcquisitionSpec& spec);
// The query and conditioning sets each scenario uses for a family.
AcquisitionSpec default_acquisition(ScenarioKind scenario, FunctionKind kind);

enum class Baseline { kRandom, kEntropy, kMargin, kLeastConfidence };
std::string_view to_string(Baseline b);
std::optional<Baseline> parse_baseline(std::string_view name);

struct BaselineResult {
  std::vector<Index> chosen;  // positions in split.unlabeled()
  std::vector<std::string> warnings;
};

// Scores every point of U with `proba` (rows aligned with split.unlabeled()).
BaselineResult baseline_select(Baseline method, const Eigen::MatrixXd& proba,
                               std::size_t unlabeled_size, std::size_t budget,
                               std::uint64_t seed);

// Dataset CSV: `id,label,f0..f{d-1}`. Split CSV: `id,role`.
void write_dataset_csv(const ScenarioSplit& split, const std::filesystem::path& path);
void write_split_csv(const ScenarioSplit& split, const std::filesystem::path& path);
struct DatasetTable {
  std::vector<PointId> ids;
  Blobs data;
};
DatasetTable read_dataset_csv(const std::filesystem::path& path);
std::vector<std::pair<PointId, Role>> read_split_csv(const std::filesystem::path& path);
// Standard split over external data, rows in table order.
ScenarioSplit split_from_tables(const Blobs& data, std::span<const PointId> ids,
                                std::span<const Role> roles);

}  // namespace smi

#endif  // SMI_SCENARIOS_HPP_
