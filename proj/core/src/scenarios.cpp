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

#include "smi/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "smi/errors.hpp"
#include "smi/random.hpp"

namespace smi {
namespace {

enum Stream : std::uint64_t {
  kMeansStream = 0,
  kPointsStream = 1,
  kShuffleStream = 2,
  kTestStream = 3,
  kRareClassStream = 4,
  kDuplicateStream = 5,
  kAssignStream = 6,
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

struct Entry {
  int cls;
  Role role;
  std::ptrdiff_t original;  // entry index, -1 for a unique point
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("scenario: " + what);
}

void add(std::vector<Entry>& e, int cls, Role role, int count) {
  for (int i = 0; i < count; ++i) e.push_back({cls, role, -1});
}

}  // namespace

BlobModel make_blob_model(int classes, int dim, double spread, std::uint64_t seed) {
  if (classes < 1 || dim < 2 || !(spread > 0.0)) {
    throw std::invalid_argument("make_blob_model: need classes >= 1, dim >= 2, spread > 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  BlobModel m;
  m.spread = spread;
  m.means.resize(classes, dim);
  for (int k = 0; k < classes; ++k) {
    for (int j = 0; j < dim; ++j) m.means(k, j) = normal(rng);
    m.means.row(k) *= 4.0 * spread / m.means.row(k).norm();
  }
  return m;
}

Blobs sample_blobs(const BlobModel& model, std::span<const int> counts, std::uint64_t seed) {
  if (counts.size() != static_cast<std::size_t>(model.means.rows())) {
    throw std::invalid_argument("sample_blobs: one count per class required");
  }
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("sample_blobs: negative count");
    total += c;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, model.spread);
  Blobs b;
  b.x.resize(total, model.means.cols());
  b.labels.reserve(total);
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (int i = 0; i < counts[k]; ++i, ++row) {
      for (Eigen::Index j = 0; j < b.x.cols(); ++j) {
        b.x(row, j) = model.means(k, j) + normal(rng);
      }
      b.labels.push_back(static_cast<int>(k));
    }
  }
  return b;
}

Blobs make_blobs(int classes, std::span<const int> counts, int dim, double spread,
                 std::uint64_t seed) {
  return sample_blobs(make_blob_model(classes, dim, spread, derive_seed(seed, kMeansStream)),
                      counts, derive_seed(seed, kPointsStream));
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kStandard: return "standard";
    case ScenarioKind::kRare: return "rare";
    case ScenarioKind::kRedundancy: return "redundancy";
    case ScenarioKind::kOod: return "ood";
  }
  return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  const std::string s = lower(name);
  if (s == "standard") return ScenarioKind::kStandard;
  if (s == "rare") return ScenarioKind::kRare;
  if (s == "redundancy" || s == "redundant") return ScenarioKind::kRedundancy;
  if (s == "ood") return ScenarioKind::kOod;
  return std::nullopt;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kLabeled: return "labeled";
    case Role::kUnlabeled: return "unlabeled";
    case Role::kRareQuery: return "rare_query";
    case Role::kValidation: return "validation";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view name) {
  const std::string s = lower(name);
  if (s == "labeled") return Role::kLabeled;
  if (s == "unlabeled") return Role::kUnlabeled;
  if (s == "rare_query") return Role::kRareQuery;
  if (s == "validation") return Role::kValidation;
  return std::nullopt;
}

bool ScenarioSplit::is_rare_class(int c) const {
  return std::binary_search(rare_classes_.begin(), rare_classes_.end(), c);
}

bool ScenarioSplit::is_ood_class(int c) const {
  return std::binary_search(ood_classes_.begin(), ood_classes_.end(), c);
}

int ScenarioSplit::model_classes() const {
  return ood_classes_.empty() ? data_classes_ : id_class_count() + 1;
}

int ScenarioSplit::label(Index i) const {
  if (i >= labels_.size()) throw std::out_of_range("ScenarioSplit::label");
  if (roles_[i] == Role::kUnlabeled) ++guard_violations_;
  return labels_[i];
}

int ScenarioSplit::model_label(Index i) const {
  const int y = label(i);
  return is_ood_class(y) ? ood_label() : y;
}

void ScenarioSplit::assign(std::vector<Role> roles) {
  roles_ = std::move(roles);
  labeled_.clear();
  unlabeled_.clear();
  rare_query_.clear();
  validation_.clear();
  for (Index i = 0; i < roles_.size(); ++i) {
    switch (roles_[i]) {
      case Role::kLabeled: labeled_.push_back(i); break;
      case Role::kUnlabeled: unlabeled_.push_back(i); break;
      case Role::kRareQuery: rare_query_.push_back(i); break;
      case Role::kValidation: validation_.push_back(i); break;
    }
  }
}

void ScenarioSplit::reveal(std::span<const Index> a) {
  std::vector<Index> sorted(a.begin(), a.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("reveal: repeated point");
  }
  for (Index i : sorted) {
    if (i >= roles_.size() || roles_[i] != Role::kUnlabeled) {
      throw std::invalid_argument("reveal: point " + std::to_string(i) + " is not unlabeled");
    }
  }
  for (Index i : sorted) roles_[i] = Role::kLabeled;
  std::vector<Index> rest;
  rest.reserve(unlabeled_.size() - sorted.size());
  std::set_difference(unlabeled_.begin(), unlabeled_.end(), sorted.begin(), sorted.end(),
                      std::back_inserter(rest));
  unlabeled_ = std::move(rest);
  std::vector<Index> merged;
  merged.reserve(labeled_.size() + sorted.size());
  std::merge(labeled_.begin(), labeled_.end(), sorted.begin(), sorted.end(),
             std::back_inserter(merged));
  labeled_ = std::move(merged);
}

Blobs ScenarioSplit::test_set(int per_class) const {
  if (external_) {
    Blobs b;
    b.x.resize(validation_.size(), features_.cols());
    for (std::size_t r = 0; r < validation_.size(); ++r) {
      b.x.row(r) = features_.row(validation_[r]);
      b.labels.push_back(label(validation_[r]));
    }
    return b;
  }
  std::vector<int> counts(data_classes_, 0);
  for (int k = 0; k < data_classes_; ++k) {
    if (!is_ood_class(k)) counts[k] = per_class;
  }
  return sample_blobs(blob_model_, counts, test_seed_);
}

namespace detail {

struct SplitAccess {
  static ScenarioSplit finish(ScenarioKind kind, const ScenarioParams& p,
                              std::vector<Entry> entries, std::vector<int> rare,
                              std::vector<int> ood);
};

}  // namespace detail

using detail::SplitAccess;

ScenarioSplit build_standard_split(ScenarioParams p) {
  require(p.labeled_per_class >= 0 && p.unlabeled_per_class >= 0 && p.valid_per_class >= 0,
          "negative count");
  std::vector<Entry> e;
  for (int k = 0; k < p.classes; ++k) {
    add(e, k, Role::kLabeled, p.labeled_per_class);
    add(e, k, Role::kValidation, p.valid_per_class);
    add(e, k, Role::kUnlabeled, p.unlabeled_per_class);
  }
  return SplitAccess::finish(ScenarioKind::kStandard, p, std::move(e), {}, {});
}

ScenarioSplit build_rare_split(ScenarioParams p) {
  require(p.rho >= 1.0, "rho must be >= 1");
  require(p.classes >= 2, "need at least two classes");
  require(p.labeled_per_common >= 0 && p.labeled_per_rare >= 0 && p.valid_per_class >= 0 &&
              p.unlabeled_per_common >= 0 && p.rare_query_per_class >= 0,
          "negative count");
  std::vector<int> order(p.classes);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(derive_seed(p.data_seed, kRareClassStream));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> rare(order.begin(), order.begin() + p.classes / 2);
  std::sort(rare.begin(), rare.end());
  const int rare_unlabeled =
      static_cast<int>(std::llround(static_cast<double>(p.unlabeled_per_common) / p.rho));
  std::vector<Entry> e;
  for (int k = 0; k < p.classes; ++k) {
    const bool is_rare = std::binary_search(rare.begin(), rare.end(), k);
    add(e, k, Role::kLabeled, is_rare ? p.labeled_per_rare : p.labeled_per_common);
    add(e, k, Role::kValidation, p.valid_per_class);
    add(e, k, Role::kUnlabeled, is_rare ? rare_unlabeled : p.unlabeled_per_common);
    if (is_rare) add(e, k, Role::kRareQuery, p.rare_query_per_class);
  }
  return SplitAccess::finish(ScenarioKind::kRare, p, std::move(e), std::move(rare), {});
}

ScenarioSplit build_redundant_split(ScenarioParams p) {
  require(p.dup_fraction >= 0.0 && p.dup_fraction <= 1.0, "dup_fraction must lie in [0, 1]");
  require(p.redundancy_factor >= 1, "redundancy_factor must be >= 1");
  require(p.unique_unlabeled >= 0 && p.redundancy_labeled_per_class >= 0 &&
              p.valid_per_class >= 0,
          "negative count");
  std::vector<Entry> e;
  std::vector<std::ptrdiff_t> unique;
  for (int k = 0; k < p.classes; ++k) {
    add(e, k, Role::kLabeled, p.redundancy_labeled_per_class);
    add(e, k, Role::kValidation, p.valid_per_class);
    const int count = p.unique_unlabeled / p.classes + (k < p.unique_unlabeled % p.classes);
    for (int i = 0; i < count; ++i) {
      unique.push_back(static_cast<std::ptrdiff_t>(e.size()));
      e.push_back({k, Role::kUnlabeled, -1});
    }
  }
  const auto dup = static_cast<std::size_t>(
      std::llround(p.dup_fraction * static_cast<double>(unique.size())));
  if (p.redundancy_factor > 1 && dup > 0) {
    std::mt19937_64 rng(derive_seed(p.seed, kDuplicateStream));
    std::shuffle(unique.begin(), unique.end(), rng);
    std::vector<std::ptrdiff_t> originals(unique.begin(), unique.begin() + dup);
    std::sort(originals.begin(), originals.end());
    for (std::ptrdiff_t o : originals) {
      for (int c = 1; c < p.redundancy_factor; ++c) {
        e.push_back({e[o].cls, Role::kUnlabeled, o});
      }
    }
  }
  return SplitAccess::finish(ScenarioKind::kRedundancy, p, std::move(e), {}, {});
}

ScenarioSplit build_ood_split(ScenarioParams p) {
  require(p.id_classes >= 2 && p.id_classes <= p.classes,
          "id_classes must lie in [2, classes]");
  require(p.ood_labeled_per_id >= 0 && p.ood_valid_per_id >= 0 &&
              p.ood_unlabeled_per_id >= 0 && p.ood_unlabeled_per_ood >= 0,
          "negative count");
  std::vector<int> ood;
  std::vector<Entry> e;
  for (int k = 0; k < p.classes; ++k) {
    if (k < p.id_classes) {
      add(e, k, Role::kLabeled, p.ood_labeled_per_id);
      add(e, k, Role::kValidation, p.ood_valid_per_id);
      add(e, k, Role::kUnlabeled, p.ood_unlabeled_per_id);
    } else if (p.ood_unlabeled_per_ood > 0) {
      ood.push_back(k);
      add(e, k, Role::kUnlabeled, p.ood_unlabeled_per_ood);
    }
  }
  if (ood.empty()) {
    // Without OOD data the task reduces to a standard split over the ID
    // classes.
    p.classes = p.id_classes;
    std::erase_if(e, [&](const Entry& x) { return x.cls >= p.id_classes; });
    return SplitAccess::finish(ScenarioKind::kStandard, p, std::move(e), {}, {});
  }
  return SplitAccess::finish(ScenarioKind::kOod, p, std::move(e), {}, std::move(ood));
}

ScenarioSplit SplitAccess::finish(ScenarioKind kind, const ScenarioParams& p,
                                  std::vector<Entry> entries, std::vector<int> rare,
                                  std::vector<int> ood) {
  require(p.classes >= 1 && p.dim >= 2 && p.spread > 0.0, "bad blob geometry");
  ScenarioSplit s;
  s.kind_ = kind;
  s.data_classes_ = p.classes;
  s.rare_classes_ = std::move(rare);
  s.ood_classes_ = std::move(ood);
  s.rho_ = kind == ScenarioKind::kRare ? p.rho : 1.0;
  s.redundancy_factor_ = kind == ScenarioKind::kRedundancy ? p.redundancy_factor : 1;
  s.blob_model_ = make_blob_model(p.classes, p.dim, p.spread, derive_seed(p.data_seed, kMeansStream));
  s.test_seed_ = derive_seed(p.data_seed, kTestStream);

  std::vector<int> counts(p.classes, 0);
  for (const Entry& x : entries) {
    if (x.original < 0) ++counts[x.cls];
  }
  const Blobs drawn = sample_blobs(s.blob_model_, counts, derive_seed(p.data_seed, kPointsStream));
  // Per class, a seeded permutation of the drawn rows decides their roles.
  std::vector<std::vector<Eigen::Index>> rows_of_class(p.classes);
  std::mt19937_64 assign_rng(derive_seed(p.seed, kAssignStream));
  for (Eigen::Index r = 0, k = 0; k < p.classes; ++k) {
    auto& rows = rows_of_class[k];
    rows.resize(counts[k]);
    std::iota(rows.begin(), rows.end(), r);
    std::shuffle(rows.begin(), rows.end(), assign_rng);
    r += counts[k];
  }
  std::vector<std::size_t> next(p.classes, 0);

  const std::size_t n = entries.size();
  std::vector<Index> pos(n);
  std::iota(pos.begin(), pos.end(), Index{0});
  std::mt19937_64 rng(derive_seed(p.seed, kShuffleStream));
  std::shuffle(pos.begin(), pos.end(), rng);

  s.features_.resize(n, p.dim);
  s.labels_.resize(n);
  s.duplication_map_.resize(n);
  std::vector<Role> roles(n);
  std::vector<Eigen::Index> source(n);
  for (std::size_t e = 0; e < n; ++e) {
    const Entry& x = entries[e];
    source[e] = x.original < 0 ? rows_of_class[x.cls][next[x.cls]++] : source[x.original];
    s.features_.row(pos[e]) = drawn.x.row(source[e]);
    s.labels_[pos[e]] = x.cls;
    roles[pos[e]] = x.role;
    s.duplication_map_[pos[e]] = x.original < 0 ? pos[e] : pos[x.original];
  }
  s.ids_.resize(n);
  std::iota(s.ids_.begin(), s.ids_.end(), PointId{0});
  s.assign(std::move(roles));
  if (kind == ScenarioKind::kOod) s.id_set_ = s.validation_;
  return s;
}

ScenarioSplit build_split(const ScenarioParams& params) {
  switch (params.kind) {
    case ScenarioKind::kStandard: return build_standard_split(params);
    case ScenarioKind::kRare: return build_rare_split(params);
    case ScenarioKind::kRedundancy: return build_redundant_split(params);
    case ScenarioKind::kOod: return build_ood_split(params);
  }
  throw ConfigError("scenario: unknown kind");
}

ScenarioSplit update_ood_sets(const ScenarioSplit& split, std::span<const Index> a) {
  ScenarioSplit out = split;
  out.reveal(a);
  for (Index i : a) {
    (out.is_ood_class(out.label(i)) ? out.ood_set_ : out.id_set_).push_back(i);
  }
  std::sort(out.id_set_.begin(), out.id_set_.end());
  std::sort(out.ood_set_.begin(), out.ood_set_.end());
  return out;
}

std::string_view to_string(QuerySource s) {
  switch (s) {
    case QuerySource::kNone: return "none";
    case QuerySource::kRareSet: return "rare_set";
    case QuerySource::kLabeledId: return "labeled_id";
    case QuerySource::kFullUnlabeled: return "full_unlabeled";
  }
  return "?";
}

std::string_view to_string(CondSource s) {
  switch (s) {
    case CondSource::kNone: return "none";
    case CondSource::kLabeled: return "labeled";
    case CondSource::kLabeledOod: return "labeled_ood";
  }
  return "?";
}

void validate(const AcquisitionSpec& spec) {
  const std::string name(to_string(spec.kind));
  const bool query_set = spec.query == QuerySource::kRareSet ||
                         spec.query == QuerySource::kLabeledId;
  switch (family_of(spec.kind)) {
    case FunctionFamily::kSubmodular:
      require(spec.query != QuerySource::kRareSet && spec.query != QuerySource::kLabeledId &&
                  spec.cond == CondSource::kNone,
              name + " takes no query or conditioning set");
      break;
    case FunctionFamily::kMutualInformation:
      require(query_set && spec.cond == CondSource::kNone,
              name + " needs a query set and no conditioning set");
      break;
    case FunctionFamily::kConditionalGain:
      require(spec.query == QuerySource::kFullUnlabeled && spec.cond != CondSource::kNone,
              name + " needs Q = U and a conditioning set");
      break;
    case FunctionFamily::kConditionalMutualInformation:
      require(spec.query != QuerySource::kNone && spec.cond != CondSource::kNone,
              name + " needs a query and a conditioning set");
      break;
  }
}

AcquisitionSpec default_acquisition(ScenarioKind scenario, FunctionKind kind) {
  AcquisitionSpec spec{kind, QuerySource::kFullUnlabeled, CondSource::kNone};
  const FunctionFamily family = family_of(kind);
  const bool needs_query = family == FunctionFamily::kMutualInformation ||
                           family == FunctionFamily::kConditionalMutualInformation;
  const bool needs_cond = family == FunctionFamily::kConditionalGain ||
                          family == FunctionFamily::kConditionalMutualInformation;
  if (needs_query) {
    switch (scenario) {
      case ScenarioKind::kRare: spec.query = QuerySource::kRareSet; break;
      case ScenarioKind::kOod: spec.query = QuerySource::kLabeledId; break;
      default:
        throw ConfigError("scenario: " + std::string(to_string(scenario)) +
                          " has no query set for " + std::string(to_string(kind)));
    }
  }
  if (needs_cond) {
    spec.cond = scenario == ScenarioKind::kOod ? CondSource::kLabeledOod : CondSource::kLabeled;
  }
  validate(spec);
  return spec;
}

std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::kRandom: return "RANDOM";
    case Baseline::kEntropy: return "ENTROPY";
    case Baseline::kMargin: return "MARGIN";
    case Baseline::kLeastConfidence: return "LEAST_CONF";
  }
  return "?";
}

std::optional<Baseline> parse_baseline(std::string_view name) {
  const std::string s = lower(name);
  if (s == "random") return Baseline::kRandom;
  if (s == "entropy") return Baseline::kEntropy;
  if (s == "margin") return Baseline::kMargin;
  if (s == "least_conf" || s == "least_confidence") return Baseline::kLeastConfidence;
  return std::nullopt;
}

BaselineResult baseline_select(Baseline method, const Eigen::MatrixXd& proba,
                               std::size_t unlabeled_size, std::size_t budget,
                               std::uint64_t seed) {
  BaselineResult out;
  if (budget == 0) throw std::invalid_argument("baseline_select: budget must be positive");
  if (budget > unlabeled_size) {
    out.warnings.push_back("budget " + std::to_string(budget) + " exceeds |U| = " +
                           std::to_string(unlabeled_size) + "; selecting all");
    budget = unlabeled_size;
  }
  std::vector<Index> order(unlabeled_size);
  std::iota(order.begin(), order.end(), Index{0});
  if (method == Baseline::kRandom) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < budget; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, unlabeled_size - 1);
      std::swap(order[i], order[pick(rng)]);
    }
    out.chosen.assign(order.begin(), order.begin() + budget);
    return out;
  }
  if (static_cast<std::size_t>(proba.rows()) != unlabeled_size) {
    throw std::invalid_argument("baseline_select: probability rows do not match |U|");
  }
  const UncertaintyScores s = uncertainty(proba);
  // Larger key is preferred.
  std::vector<double> key(unlabeled_size);
  for (std::size_t i = 0; i < unlabeled_size; ++i) {
    switch (method) {
      case Baseline::kEntropy: key[i] = s.entropy[i]; break;
      case Baseline::kMargin: key[i] = -s.margin[i]; break;
      case Baseline::kLeastConfidence: key[i] = s.least_confidence[i]; break;
      case Baseline::kRandom: break;
    }
  }
  std::partial_sort(order.begin(), order.begin() + budget, order.end(),
                    [&](Index a, Index b) { return key[a] != key[b] ? key[a] > key[b] : a < b; });
  out.chosen.assign(order.begin(), order.begin() + budget);
  return out;
}

void write_dataset_csv(const ScenarioSplit& split, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "id,label";
  for (Eigen::Index j = 0; j < split.features().cols(); ++j) out << ",f" << j;
  out << "\n";
  for (Index i = 0; i < split.size(); ++i) {
    // Unlabeled points are written with label -1.
    const int y = split.role(i) == Role::kUnlabeled ? -1 : split.label(i);
    out << split.ids()[i] << "," << y;
    for (Eigen::Index j = 0; j < split.features().cols(); ++j) {
      out << "," << split.features()(i, j);
    }
    out << "\n";
  }
}

void write_split_csv(const ScenarioSplit& split, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "id,role\n";
  for (Index i = 0; i < split.size(); ++i) {
    out << split.ids()[i] << "," << to_string(split.role(i)) << "\n";
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> f;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) f.push_back(cell);
  return f;
}

}  // namespace

DatasetTable read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file");
  const auto header = split_fields(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label") {
    throw ConfigError(path.string() + ": header must be id,label,f0..");
  }
  const std::size_t d = header.size() - 2;
  std::vector<double> values;
  DatasetTable t;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != d + 2) throw ConfigError(path.string() + ": ragged row");
    try {
      t.ids.push_back(std::stoll(f[0]));
      t.data.labels.push_back(std::stoi(f[1]));
      for (std::size_t j = 0; j < d; ++j) values.push_back(std::stod(f[j + 2]));
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": malformed number in '" + line + "'");
    }
  }
  t.data.x.resize(static_cast<Eigen::Index>(t.ids.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < t.ids.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) t.data.x(i, j) = values[i * d + j];
  }
  return t;
}

std::vector<std::pair<PointId, Role>> read_split_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "id,role") {
    throw ConfigError(path.string() + ": header must be id,role");
  }
  std::vector<std::pair<PointId, Role>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    const auto role = f.size() == 2 ? parse_role(f[1]) : std::nullopt;
    if (!role) throw ConfigError(path.string() + ": bad row '" + line + "'");
    try {
      out.emplace_back(std::stoll(f[0]), *role);
    } catch (const std::exception&) {
      throw ConfigError(path.string() + ": bad id in '" + line + "'");
    }
  }
  return out;
}

ScenarioSplit split_from_tables(const Blobs& data, std::span<const PointId> ids,
                                std::span<const Role> roles) {
  const auto n = static_cast<std::size_t>(data.x.rows());
  require(ids.size() == n && roles.size() == n && data.labels.size() == n,
          "dataset and split tables disagree in length");
  require(n > 0 && data.x.cols() >= 2, "dataset needs rows and at least two features");
  ScenarioSplit s;
  s.kind_ = ScenarioKind::kStandard;
  s.features_ = data.x;
  s.labels_ = data.labels;
  s.ids_.assign(ids.begin(), ids.end());
  std::vector<PointId> sorted_ids = s.ids_;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  require(std::adjacent_find(sorted_ids.begin(), sorted_ids.end()) == sorted_ids.end(),
          "duplicate ids");
  int classes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (roles[i] != Role::kUnlabeled) {
      require(data.labels[i] >= 0, "labeled point " + std::to_string(ids[i]) + " lacks a label");
    }
    classes = std::max(classes, data.labels[i] + 1);
  }
  s.data_classes_ = classes;
  s.duplication_map_.resize(n);
  std::iota(s.duplication_map_.begin(), s.duplication_map_.end(), Index{0});
  s.external_ = true;
  s.assign(std::vector<Role>(roles.begin(), roles.end()));
  return s;
}

}  // namespace smi
