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

#include "smi/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "smi/errors.hpp"
#include "smi/random.hpp"

namespace smi {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

enum Stream : std::uint64_t {
  kTrainStream = 1000,
  kBaselineStream = 2000,
  kGreedyStream = 3000,
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::optional<QuerySource> parse_query_source(const std::string& s) {
  for (auto q : {QuerySource::kNone, QuerySource::kRareSet, QuerySource::kLabeledId,
                 QuerySource::kFullUnlabeled}) {
    if (s == to_string(q)) return q;
  }
  return std::nullopt;
}

std::optional<CondSource> parse_cond_source(const std::string& s) {
  for (auto c : {CondSource::kNone, CondSource::kLabeled, CondSource::kLabeledOod}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

Features rows_of(const Features& x, std::span<const Index> rows) {
  Features out(rows.size(), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = x.row(rows[r]);
  return out;
}

std::vector<PointId> ids_of(const ScenarioSplit& split, std::span<const Index> rows) {
  std::vector<PointId> out;
  out.reserve(rows.size());
  for (Index i : rows) out.push_back(split.ids()[i]);
  return out;
}

SurrogateModel train_on_labeled(const ScenarioSplit& split, const TrainConfig& base,
                                std::uint64_t seed) {
  const auto& l = split.labeled();
  std::vector<int> y;
  y.reserve(l.size());
  for (Index i : l) y.push_back(split.model_label(i));
  TrainConfig tc = base;
  tc.seed = seed;
  return train(rows_of(split.features(), l), y, split.model_classes(), tc);
}

GreedyVariant choose_variant(const OptimizerConfig& opt, FunctionKind kind,
                             std::size_t chunk_n) {
  if (opt.variant != "auto") {
    auto v = parse_greedy_variant(opt.variant);
    if (!v) throw ConfigError("unknown optimizer '" + opt.variant + "'");
    return *v;
  }
  return auto_greedy_variant(kind, chunk_n);
}

std::size_t choose_partitions(const OptimizerConfig& opt, FunctionKind kind, std::size_t n,
                              std::size_t budget) {
  std::size_t p = opt.partitions;
  if (p == 0) {
    p = 1;
    if ((required_blocks(kind) & kGroundBlock) != 0 && opt.chunk_size > 0) {
      p = (n + opt.chunk_size - 1) / opt.chunk_size;
    }
  }
  return std::clamp<std::size_t>(p, 1, std::max<std::size_t>(1, std::min(budget, n)));
}

struct Selection {
  std::vector<Index> positions;  // into split.unlabeled()
  std::optional<double> objective;
  std::size_t evaluations = 0;
  std::size_t numerical_warnings = 0;
  std::vector<std::string> warnings;
  std::string optimizer;
  std::size_t partitions = 1;
};

std::shared_ptr<const SimilarityKernel> shared(SimilarityKernel k) {
  return std::make_shared<const SimilarityKernel>(std::move(k));
}

Selection select_with_function(FunctionKind kind, const AcquisitionSpec& spec,
                               const RunConfig& config, const ScenarioSplit& split,
                               const SurrogateModel& model, std::size_t budget, int round) {
  const auto& u = split.unlabeled();
  const Features xu = rows_of(split.features(), u);
  const std::vector<int> hyp = hypothesized_labels(model, xu);
  const GradientFactors eu = gradient_factors(model, xu, hyp, ids_of(split, u));

  auto labeled_embedding = [&](const std::vector<Index>& rows) {
    std::vector<int> y;
    y.reserve(rows.size());
    for (Index i : rows) y.push_back(split.model_label(i));
    return gradient_factors(model, rows_of(split.features(), rows), y, ids_of(split, rows));
  };

  const bool query_is_ground = spec.query == QuerySource::kFullUnlabeled;
  std::vector<Index> q;
  if (spec.query == QuerySource::kRareSet) q = split.rare_query();
  if (spec.query == QuerySource::kLabeledId) q = split.id_set();
  std::vector<Index> p;
  if (spec.cond == CondSource::kLabeled) p = split.labeled();
  if (spec.cond == CondSource::kLabeledOod) p = split.ood_set();

  FunctionKind effective = kind;
  if (family_of(kind) == FunctionFamily::kConditionalMutualInformation && query_is_ground) {
    effective = reduced_kind(kind, true, p.empty());
  }
  const unsigned need = required_blocks(effective);
  const double eps = is_log_det(effective) ? config.logdet_epsilon : 0.0;

  const GradientFactors eq = labeled_embedding(q);
  const GradientFactors ep = labeled_embedding(p);

  auto cross = [](const GradientFactors& a, const GradientFactors& b) {
    if (a.rows() == 0 || b.rows() == 0) {
      return SimilarityKernel(a.rows(), b.rows(), {}, false, a.residual.ids(),
                              b.residual.ids());
    }
    return outer_cosine_kernel(a.residual, a.input, b.residual, b.input);
  };
  auto square = [&](const GradientFactors& a) {
    if (a.rows() == 0) return SimilarityKernel(0, 0, {}, true, {}, {});
    return regularize(outer_cosine_kernel(a.residual, a.input), eps);
  };

  KernelBlocks shared_blocks;
  if (need & kQueryBlock) shared_blocks.query = shared(square(eq));
  if (need & kCondBlock) shared_blocks.cond = shared(square(ep));
  if (need & kQueryCondBlock) shared_blocks.query_cond = shared(cross(eq, ep));

  FunctionParams params;
  params.gc_lambda = config.gc_lambda;
  params.eta = config.eta;
  params.cache = make_conditioning_cache();

  ChunkFactory factory = [&](std::span<const Index> chunk) {
    const GradientFactors ec = eu.select(chunk);
    KernelBlocks b = shared_blocks;
    if (need & kGroundBlock) b.ground = shared(square(ec));
    if (need & kGroundQueryBlock) b.ground_query = shared(cross(ec, eq));
    if (need & kGroundCondBlock) b.ground_cond = shared(cross(ec, ep));
    return make_function(effective, b, params);
  };

  Selection out;
  const std::size_t parts = choose_partitions(config.optimizer, effective, u.size(), budget);
  GreedyConfig g;
  g.budget = budget;
  g.partitions = parts;
  g.variant = choose_variant(config.optimizer, effective, (u.size() + parts - 1) / parts);
  g.epsilon = config.optimizer.epsilon;
  g.seed = derive_seed(config.seed, kGreedyStream + static_cast<std::uint64_t>(round));
  g.stop_on_negative = config.optimizer.stop_on_negative;
  g.threads = config.optimizer.threads;
  SelectionResult r = partitioned_select(u.size(), factory, g);
  out.positions = std::move(r.chosen);
  out.objective = r.value;
  out.evaluations = r.evaluations;
  out.numerical_warnings = r.numerical_warnings;
  out.warnings = std::move(r.warnings);
  out.optimizer = std::string(to_string(g.variant));
  out.partitions = parts;
  return out;
}

template <typename E>
[[noreturn]] void rethrow_with_round(const E& e, int round) {
  throw E("round " + std::to_string(round) + ": " + e.what());
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  reject_unknown(j,
                 {"scenario", "method", "query", "cond", "rounds", "budget", "optimizer",
                  "model", "gc_lambda", "eta", "logdet_epsilon", "seed", "output_dir",
                  "dataset_csv", "split_csv"},
                 "config");
  RunConfig c;
  if (j.contains("scenario")) {
    const json& s = j["scenario"];
    reject_unknown(s,
                   {"kind", "classes", "dim", "spread", "data_seed", "valid_per_class",
                    "labeled_per_class", "unlabeled_per_class", "rho", "labeled_per_common",
                    "labeled_per_rare", "unlabeled_per_common", "rare_query_per_class",
                    "unique_unlabeled", "dup_fraction", "redundancy_factor",
                    "redundancy_labeled_per_class", "id_classes", "ood_labeled_per_id",
                    "ood_valid_per_id", "ood_unlabeled_per_id", "ood_unlabeled_per_ood",
                    "test_per_class"},
                   "scenario");
    ScenarioParams& p = c.scenario;
    if (s.contains("kind")) {
      auto kind = parse_scenario_kind(s["kind"].is_string() ? s["kind"].get<std::string>() : "");
      if (!kind) throw ConfigError("unknown scenario kind " + s["kind"].dump());
      p.kind = *kind;
    }
    read(s, "classes", p.classes);
    read(s, "dim", p.dim);
    read(s, "spread", p.spread);
    read(s, "data_seed", p.data_seed);
    read(s, "valid_per_class", p.valid_per_class);
    read(s, "labeled_per_class", p.labeled_per_class);
    read(s, "unlabeled_per_class", p.unlabeled_per_class);
    read(s, "rho", p.rho);
    read(s, "labeled_per_common", p.labeled_per_common);
    read(s, "labeled_per_rare", p.labeled_per_rare);
    read(s, "unlabeled_per_common", p.unlabeled_per_common);
    read(s, "rare_query_per_class", p.rare_query_per_class);
    read(s, "unique_unlabeled", p.unique_unlabeled);
    read(s, "dup_fraction", p.dup_fraction);
    read(s, "redundancy_factor", p.redundancy_factor);
    read(s, "redundancy_labeled_per_class", p.redundancy_labeled_per_class);
    read(s, "id_classes", p.id_classes);
    read(s, "ood_labeled_per_id", p.ood_labeled_per_id);
    read(s, "ood_valid_per_id", p.ood_valid_per_id);
    read(s, "ood_unlabeled_per_id", p.ood_unlabeled_per_id);
    read(s, "ood_unlabeled_per_ood", p.ood_unlabeled_per_ood);
    read(s, "test_per_class", p.test_per_class);
  }
  read(j, "method", c.method);
  if (j.contains("query")) {
    auto q = parse_query_source(j["query"].is_string() ? j["query"].get<std::string>() : "");
    if (!q) throw ConfigError("unknown query source " + j["query"].dump());
    c.query = q;
  }
  if (j.contains("cond")) {
    auto p = parse_cond_source(j["cond"].is_string() ? j["cond"].get<std::string>() : "");
    if (!p) throw ConfigError("unknown conditioning source " + j["cond"].dump());
    c.cond = p;
  }
  read(j, "rounds", c.rounds);
  read(j, "budget", c.budget);
  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    reject_unknown(o, {"variant", "epsilon", "partitions", "chunk_size", "threads",
                       "stop_on_negative"},
                   "optimizer");
    read(o, "variant", c.optimizer.variant);
    read(o, "epsilon", c.optimizer.epsilon);
    read(o, "partitions", c.optimizer.partitions);
    read(o, "chunk_size", c.optimizer.chunk_size);
    read(o, "threads", c.optimizer.threads);
    read(o, "stop_on_negative", c.optimizer.stop_on_negative);
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    reject_unknown(m, {"learning_rate", "epochs", "l2", "init_scale", "max_halvings"}, "model");
    read(m, "learning_rate", c.model.learning_rate);
    read(m, "epochs", c.model.epochs);
    read(m, "l2", c.model.l2);
    read(m, "init_scale", c.model.init_scale);
    read(m, "max_halvings", c.model.max_halvings);
  }
  read(j, "gc_lambda", c.gc_lambda);
  read(j, "eta", c.eta);
  read(j, "logdet_epsilon", c.logdet_epsilon);
  read(j, "seed", c.seed);
  std::string path;
  if (j.contains("output_dir")) {
    read(j, "output_dir", path);
    c.output_dir = path;
  }
  if (j.contains("dataset_csv")) {
    read(j, "dataset_csv", path);
    c.dataset_csv = path;
  }
  if (j.contains("split_csv")) {
    read(j, "split_csv", path);
    c.split_csv = path;
  }
  return c;
}

std::string run_config_json(const RunConfig& c) {
  const ScenarioParams& p = c.scenario;
  json j;
  j["scenario"] = {
      {"kind", to_string(p.kind)},
      {"classes", p.classes},
      {"dim", p.dim},
      {"spread", p.spread},
      {"data_seed", p.data_seed},
      {"valid_per_class", p.valid_per_class},
      {"labeled_per_class", p.labeled_per_class},
      {"unlabeled_per_class", p.unlabeled_per_class},
      {"rho", p.rho},
      {"labeled_per_common", p.labeled_per_common},
      {"labeled_per_rare", p.labeled_per_rare},
      {"unlabeled_per_common", p.unlabeled_per_common},
      {"rare_query_per_class", p.rare_query_per_class},
      {"unique_unlabeled", p.unique_unlabeled},
      {"dup_fraction", p.dup_fraction},
      {"redundancy_factor", p.redundancy_factor},
      {"redundancy_labeled_per_class", p.redundancy_labeled_per_class},
      {"id_classes", p.id_classes},
      {"ood_labeled_per_id", p.ood_labeled_per_id},
      {"ood_valid_per_id", p.ood_valid_per_id},
      {"ood_unlabeled_per_id", p.ood_unlabeled_per_id},
      {"ood_unlabeled_per_ood", p.ood_unlabeled_per_ood},
      {"test_per_class", p.test_per_class},
  };
  j["method"] = c.method;
  if (c.query) j["query"] = to_string(*c.query);
  if (c.cond) j["cond"] = to_string(*c.cond);
  j["rounds"] = c.rounds;
  j["budget"] = c.budget;
  j["optimizer"] = {{"variant", c.optimizer.variant},
                    {"epsilon", c.optimizer.epsilon},
                    {"partitions", c.optimizer.partitions},
                    {"chunk_size", c.optimizer.chunk_size},
                    {"threads", c.optimizer.threads},
                    {"stop_on_negative", c.optimizer.stop_on_negative}};
  j["model"] = {{"learning_rate", c.model.learning_rate},
                {"epochs", c.model.epochs},
                {"l2", c.model.l2},
                {"init_scale", c.model.init_scale},
                {"max_halvings", c.model.max_halvings}};
  j["gc_lambda"] = c.gc_lambda;
  j["eta"] = c.eta;
  j["logdet_epsilon"] = c.logdet_epsilon;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.string();
  if (c.dataset_csv) j["dataset_csv"] = c.dataset_csv->string();
  if (c.split_csv) j["split_csv"] = c.split_csv->string();
  return j.dump(2);
}

void validate_run_config(const RunConfig& c, const ScenarioSplit& split) {
  if (c.rounds < 1) throw ConfigError("rounds must be >= 1");
  if (c.budget == 0) throw ConfigError("budget must be positive");
  if (c.budget * static_cast<std::size_t>(c.rounds) > split.unlabeled().size()) {
    throw ConfigError("budget * rounds = " +
                      std::to_string(c.budget * static_cast<std::size_t>(c.rounds)) +
                      " exceeds |U| = " + std::to_string(split.unlabeled().size()));
  }
  if (c.optimizer.variant != "auto" && !parse_greedy_variant(c.optimizer.variant)) {
    throw ConfigError("unknown optimizer '" + c.optimizer.variant + "'");
  }
  if (!(c.optimizer.epsilon > 0.0 && c.optimizer.epsilon < 1.0)) {
    throw ConfigError("optimizer epsilon must lie in (0, 1)");
  }
  if (c.model.epochs < 0 || !(c.model.learning_rate > 0.0) || c.model.l2 < 0.0) {
    throw ConfigError("model: need epochs >= 0, learning_rate > 0, l2 >= 0");
  }
  if (c.logdet_epsilon < 0.0) throw ConfigError("logdet_epsilon must be >= 0");
  if (parse_baseline(c.method)) return;
  const auto kind = parse_function_kind(c.method);
  if (!kind) throw ConfigError("unknown method '" + c.method + "'");
  AcquisitionSpec spec = default_acquisition(split.kind(), *kind);
  if (c.query) spec.query = *c.query;
  if (c.cond) spec.cond = *c.cond;
  validate(spec);
  if (spec.query == QuerySource::kRareSet && split.rare_classes().empty()) {
    throw ConfigError("query source rare_set needs the rare scenario");
  }
  if ((spec.query == QuerySource::kLabeledId || spec.cond == CondSource::kLabeledOod) &&
      split.kind() != ScenarioKind::kOod) {
    throw ConfigError("labeled_id / labeled_ood sources need the ood scenario");
  }
}

ScenarioSplit make_split(const RunConfig& config) {
  if (config.dataset_csv || config.split_csv) {
    if (!config.dataset_csv || !config.split_csv) {
      throw ConfigError("dataset_csv and split_csv must be given together");
    }
    const DatasetTable table = read_dataset_csv(*config.dataset_csv);
    const auto roles = read_split_csv(*config.split_csv);
    std::unordered_map<PointId, Role> by_id(roles.begin(), roles.end());
    std::vector<Role> ordered;
    ordered.reserve(table.ids.size());
    for (PointId id : table.ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) throw ConfigError("split file lacks id " + std::to_string(id));
      ordered.push_back(it->second);
    }
    return split_from_tables(table.data, table.ids, ordered);
  }
  ScenarioParams p = config.scenario;
  p.seed = config.seed;
  return build_split(p);
}

std::pair<double, std::optional<double>> test_accuracy(const SurrogateModel& model,
                                                       const ScenarioSplit& split,
                                                       const Blobs& test) {
  if (test.labels.empty()) return {0.0, std::nullopt};
  const int id_classes = split.ood_classes().empty() ? 0 : split.id_class_count();
  const std::vector<int> pred = hypothesized_labels(model, test.x, id_classes);
  std::size_t correct = 0;
  std::map<int, std::pair<std::size_t, std::size_t>> rare;  // class -> (hit, total)
  for (int c : split.rare_classes()) rare[c] = {0, 0};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool hit = pred[i] == test.labels[i];
    correct += hit;
    auto it = rare.find(test.labels[i]);
    if (it != rare.end()) {
      it->second.first += hit;
      ++it->second.second;
    }
  }
  const double acc = static_cast<double>(correct) / static_cast<double>(pred.size());
  if (rare.empty()) return {acc, std::nullopt};
  double sum = 0.0;
  for (const auto& [c, ht] : rare) {
    sum += ht.second == 0 ? 0.0 : static_cast<double>(ht.first) / static_cast<double>(ht.second);
  }
  return {acc, sum / static_cast<double>(rare.size())};
}

RoundRecord compute_metrics(const SurrogateModel& model, const ScenarioSplit& split,
                            const Blobs& test, std::span<const Index> selected,
                            std::span<const Index> cumulative) {
  RoundRecord r;
  r.labeled_size = split.labeled().size();
  std::tie(r.accuracy, r.rare_accuracy) = test_accuracy(model, split, test);
  std::size_t ids = 0;
  for (Index i : selected) {
    const int y = split.label(i);
    if (split.is_rare_class(y)) ++r.rare_selected;
    if (!split.is_ood_class(y)) ++ids;
  }
  if (split.kind() == ScenarioKind::kOod) r.id_selected = ids;
  std::unordered_set<Index> originals;
  for (Index i : cumulative) originals.insert(split.duplication_map()[i]);
  r.unique_selected = originals.size();
  r.selected_ids = ids_of(split, selected);
  return r;
}

RunResult run_al(const RunConfig& config, const RoundCallback& on_round) {
  return run_al(config, make_split(config), on_round);
}

RunResult run_al(const RunConfig& config, ScenarioSplit split, const RoundCallback& on_round) {
  validate_run_config(config, split);
  RunResult result;
  const Blobs test = split.test_set(config.scenario.test_per_class);
  const auto baseline = parse_baseline(config.method);
  const auto kind = parse_function_kind(config.method);
  std::optional<AcquisitionSpec> spec;
  if (!baseline) {
    spec = default_acquisition(split.kind(), *kind);
    if (config.query) spec->query = *config.query;
    if (config.cond) spec->cond = *config.cond;
  }

  std::uint64_t trainings = 0;
  auto retrain = [&] {
    return train_on_labeled(split, config.model, derive_seed(config.seed, kTrainStream + trainings++));
  };
  SurrogateModel model = retrain();
  std::tie(result.initial_accuracy, result.initial_rare_accuracy) =
      test_accuracy(model, split, test);

  std::vector<Index> cumulative;
  for (int round = 0; round < config.rounds; ++round) {
    try {
      RoundTiming timing;
      auto t0 = Clock::now();
      const std::vector<Index> u = split.unlabeled();
      Selection sel;
      if (baseline) {
        Eigen::MatrixXd proba;
        if (*baseline != Baseline::kRandom) {
          proba = predict_proba(model, rows_of(split.features(), u));
        }
        BaselineResult b = baseline_select(
            *baseline, proba, u.size(), config.budget,
            derive_seed(config.seed, kBaselineStream + static_cast<std::uint64_t>(round)));
        sel.positions = std::move(b.chosen);
        sel.warnings = std::move(b.warnings);
        sel.optimizer = "baseline";
      } else {
        sel = select_with_function(*kind, *spec, config, split, model, config.budget, round);
      }
      timing.select_seconds = seconds_since(t0);
      result.optimizer = sel.optimizer;
      result.partitions = sel.partitions;
      for (auto& w : sel.warnings) result.warnings.push_back("round " + std::to_string(round) + ": " + w);

      std::vector<Index> chosen;
      chosen.reserve(sel.positions.size());
      for (Index pos : sel.positions) chosen.push_back(u[pos]);
      if (split.kind() == ScenarioKind::kOod) {
        split = update_ood_sets(split, chosen);
      } else {
        split.reveal(chosen);
      }
      cumulative.insert(cumulative.end(), chosen.begin(), chosen.end());

      auto t1 = Clock::now();
      model = retrain();
      timing.train_seconds = seconds_since(t1);

      RoundRecord rec = compute_metrics(model, split, test, chosen, cumulative);
      rec.round = round;
      rec.objective = sel.objective;
      rec.evaluations = sel.evaluations;
      rec.numerical_warnings = sel.numerical_warnings;
      result.records.push_back(rec);
      result.timings.push_back(timing);
      if (on_round) on_round(rec);
    } catch (const NumericalError& e) {
      rethrow_with_round(e, round);
    } catch (const ConfigError& e) {
      rethrow_with_round(e, round);
    } catch (const std::invalid_argument& e) {
      rethrow_with_round(e, round);
    }
  }
  result.final_model = std::move(model);
  result.guard_violations = split.guard_violations();
  return result;
}

SimilarityKernel initial_kernel(const RunConfig& config) {
  const ScenarioSplit split = make_split(config);
  validate_run_config(config, split);
  const SurrogateModel model =
      train_on_labeled(split, config.model, derive_seed(config.seed, kTrainStream));
  const auto& u = split.unlabeled();
  const Features xu = rows_of(split.features(), u);
  const GradientFactors eu =
      gradient_factors(model, xu, hypothesized_labels(model, xu), ids_of(split, u));
  const auto kind = parse_function_kind(config.method);
  if (!kind || (required_blocks(*kind) & kGroundBlock) != 0) {
    const double eps = kind && is_log_det(*kind) ? config.logdet_epsilon : 0.0;
    return regularize(outer_cosine_kernel(eu.residual, eu.input), eps);
  }
  AcquisitionSpec spec = default_acquisition(split.kind(), *kind);
  if (config.query) spec.query = *config.query;
  const std::vector<Index>& q =
      spec.query == QuerySource::kRareSet ? split.rare_query() : split.id_set();
  std::vector<int> y;
  for (Index i : q) y.push_back(split.model_label(i));
  const GradientFactors eq =
      gradient_factors(model, rows_of(split.features(), q), y, ids_of(split, q));
  return outer_cosine_kernel(eu.residual, eu.input, eq.residual, eq.input);
}

std::string round_record_json(const RoundRecord& r) {
  json j;
  j["round"] = r.round;
  j["labeled_size"] = r.labeled_size;
  j["accuracy"] = r.accuracy;
  j["rare_accuracy"] = r.rare_accuracy ? json(*r.rare_accuracy) : json(nullptr);
  j["rare_selected"] = r.rare_selected;
  j["unique_selected"] = r.unique_selected;
  j["id_selected"] = r.id_selected ? json(*r.id_selected) : json(nullptr);
  j["selected_ids"] = r.selected_ids;
  j["objective"] = r.objective ? json(*r.objective) : json(nullptr);
  j["evaluations"] = r.evaluations;
  j["numerical_warnings"] = r.numerical_warnings;
  return j.dump();
}

std::string summary_json(const RunConfig& config, const RunResult& result,
                         double elapsed_seconds) {
  json j;
  j["method"] = config.method;
  j["scenario"] = to_string(config.scenario.kind);
  j["seed"] = config.seed;
  j["rounds"] = result.records.size();
  j["budget"] = config.budget;
  j["optimizer"] = result.optimizer;
  j["partitions"] = result.partitions;
  j["initial_accuracy"] = result.initial_accuracy;
  j["initial_rare_accuracy"] =
      result.initial_rare_accuracy ? json(*result.initial_rare_accuracy) : json(nullptr);
  if (!result.records.empty()) {
    const RoundRecord& last = result.records.back();
    j["final_accuracy"] = last.accuracy;
    j["final_rare_accuracy"] = last.rare_accuracy ? json(*last.rare_accuracy) : json(nullptr);
    j["final_labeled_size"] = last.labeled_size;
    j["final_unique_selected"] = last.unique_selected;
  }
  j["guard_violations"] = result.guard_violations;
  j["warnings"] = result.warnings;
  json timings = json::array();
  for (const auto& t : result.timings) {
    timings.push_back({{"select_seconds", t.select_seconds}, {"train_seconds", t.train_seconds}});
  }
  j["timings"] = timings;
  j["elapsed_seconds"] = elapsed_seconds;
  j["config"] = json::parse(run_config_json(config));
  return j.dump(2);
}

}  // namespace smi
