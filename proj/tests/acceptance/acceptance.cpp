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

// Acceptance suite. Each criterion prints one "[PASS]" or "[FAIL]" line;
// the process exits non-zero if any selected criterion fails.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "smi/functions.hpp"
#include "smi/greedy.hpp"
#include "smi/harness.hpp"
#include "smi/penalty.hpp"
#include "smi/scenarios.hpp"
#include "smi/similarity.hpp"
#include "smi/surrogate.hpp"
#include "smi/verify.hpp"

namespace {

using smi::Index;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

Outcome from_check(const smi::CheckResult& r) { return {r.passed, r.detail}; }

smi::EmbeddingMatrix normal_rows(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(rows * dim);
  for (double& x : v) x = normal(rng);
  return smi::EmbeddingMatrix(rows, dim, std::move(v));
}

smi::EmbeddingMatrix blob_rows(const smi::Blobs& b) {
  const auto rows = static_cast<std::size_t>(b.x.rows());
  const auto dim = static_cast<std::size_t>(b.x.cols());
  std::vector<double> v(rows * dim);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      v[i * dim + j] = b.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return smi::EmbeddingMatrix(rows, dim, std::move(v));
}

// Query and conditioning blocks shared by every chunk.
smi::KernelBlocks shared_blocks(smi::FunctionKind kind, const smi::EmbeddingMatrix& q,
                                const smi::EmbeddingMatrix& p) {
  const unsigned need = smi::required_blocks(kind);
  const double eps = smi::is_log_det(kind) ? smi::kLogDetRegularization : 0.0;
  smi::KernelBlocks b;
  if (need & smi::kQueryBlock) {
    b.query = std::make_shared<const smi::SimilarityKernel>(
        smi::regularize(smi::cosine_kernel(q), eps));
  }
  if (need & smi::kCondBlock) {
    b.cond = std::make_shared<const smi::SimilarityKernel>(
        smi::regularize(smi::cosine_kernel(p), eps));
  }
  if (need & smi::kQueryCondBlock) {
    b.query_cond = std::make_shared<const smi::SimilarityKernel>(smi::cosine_kernel(q, p));
  }
  return b;
}

smi::KernelBlocks chunk_blocks(smi::FunctionKind kind, smi::KernelBlocks b,
                               const smi::EmbeddingMatrix& u, const smi::EmbeddingMatrix& q,
                               const smi::EmbeddingMatrix& p) {
  const unsigned need = smi::required_blocks(kind);
  const double eps = smi::is_log_det(kind) ? smi::kLogDetRegularization : 0.0;
  if (need & smi::kGroundBlock) {
    b.ground = std::make_shared<const smi::SimilarityKernel>(
        smi::regularize(smi::cosine_kernel(u), eps));
  }
  if (need & smi::kGroundQueryBlock) {
    b.ground_query = std::make_shared<const smi::SimilarityKernel>(smi::cosine_kernel(u, q));
  }
  if (need & smi::kGroundCondBlock) {
    b.ground_cond = std::make_shared<const smi::SimilarityKernel>(smi::cosine_kernel(u, p));
  }
  return b;
}

// All rounds of one method, one RunResult per seed.
using Sweep = std::map<std::string, std::vector<smi::RunResult>>;

Sweep run_sweep(const smi::ScenarioParams& scenario, const std::vector<std::string>& methods,
                int seeds, int rounds, std::size_t budget) {
  Sweep out;
  for (const std::string& method : methods) {
    for (int s = 0; s < seeds; ++s) {
      smi::RunConfig cfg;
      cfg.scenario = scenario;
      cfg.method = method;
      cfg.rounds = rounds;
      cfg.budget = budget;
      cfg.seed = static_cast<std::uint64_t>(s);
      const auto start = std::chrono::steady_clock::now();
      out[method].push_back(smi::run_al(cfg));
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cerr << "  " << method << " seed " << s << ": " << fmt(secs, 3) << " s\n";
    }
  }
  return out;
}

template <typename F>
double mean_over_records(const std::vector<smi::RunResult>& runs, F value) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : runs) {
    for (const auto& rec : r.records) {
      sum += value(rec);
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

double mean_at_round(const std::vector<smi::RunResult>& runs, std::size_t round,
                     std::size_t smi::RoundRecord::*field) {
  double sum = 0.0;
  for (const auto& r : runs) sum += static_cast<double>(r.records.at(round).*field);
  return sum / static_cast<double>(runs.size());
}

Outcome criterion_oracle() { return from_check(smi::check_oracle_equivalence(200, 10, 1)); }

Outcome criterion_reductions() { return from_check(smi::check_reductions(20, 8, 2)); }

Outcome criterion_greedy_bound() { return from_check(smi::check_greedy_bound(200, 12, 3, 3)); }

Outcome criterion_stochastic() {
  const smi::FunctionKind kind = smi::FunctionKind::kFLVMI;
  const int classes = 10;
  const std::vector<int> counts(classes, 200);
  const smi::BlobModel model = smi::make_blob_model(classes, 32, 1.0, 4);
  const smi::EmbeddingMatrix u = blob_rows(smi::sample_blobs(model, counts, 5));
  std::vector<int> qcounts(classes, 0);
  qcounts[0] = 10;
  const smi::EmbeddingMatrix q = blob_rows(smi::sample_blobs(model, qcounts, 6));
  const smi::EmbeddingMatrix p = normal_rows(1, 32, 7);
  const auto f = smi::make_function(kind, chunk_blocks(kind, shared_blocks(kind, q, p), u, q, p));

  smi::GreedyConfig cfg;
  cfg.budget = 50;
  cfg.variant = smi::GreedyVariant::kNaive;
  const smi::SelectionResult naive = smi::greedy_select(*f, cfg);

  cfg.variant = smi::GreedyVariant::kStochastic;
  cfg.epsilon = 0.01;
  double value = 0.0, evaluations = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    const smi::SelectionResult r = smi::greedy_select(*f, cfg);
    value += r.value / seeds;
    evaluations += static_cast<double>(r.evaluations) / seeds;
  }
  const double quality = value / naive.value;
  const double speedup = static_cast<double>(naive.evaluations) / evaluations;
  return {quality >= 0.95 && speedup >= 5.0,
          "stochastic/naive objective " + fmt(quality) + " (need >= 0.95), evaluation ratio " +
              fmt(speedup) + "x (need >= 5x)"};
}

Outcome criterion_rare() {
  smi::ScenarioParams sp;
  sp.kind = smi::ScenarioKind::kRare;
  sp.rho = 10.0;
  const Sweep sw = run_sweep(sp, {"RANDOM", "ENTROPY", "FLQMI", "LOGDETMI"}, 5, 3, 125);
  auto rare_total = [&](const std::string& m) {
    double total = 0.0;
    for (const auto& r : sw.at(m)) {
      for (const auto& rec : r.records) total += static_cast<double>(rec.rare_selected);
    }
    return total;
  };
  auto rare_acc = [&](const std::string& m) {
    return mean_over_records(sw.at(m), [](const smi::RoundRecord& rec) {
      return rec.rare_accuracy.value_or(0.0);
    });
  };
  bool ok = true;
  std::ostringstream d;
  const double random_count = rare_total("RANDOM");
  d << "rare selected RANDOM " << random_count << ", ENTROPY " << rare_total("ENTROPY");
  d << "; rare accuracy RANDOM " << fmt(rare_acc("RANDOM")) << ", ENTROPY "
    << fmt(rare_acc("ENTROPY"));
  for (const std::string m : {"FLQMI", "LOGDETMI"}) {
    const double count = rare_total(m);
    const double acc = rare_acc(m);
    ok = ok && count >= 3.0 * random_count && acc > rare_acc("RANDOM") &&
         acc > rare_acc("ENTROPY");
    d << "; " << m << " selected " << count << " (" << fmt(count / random_count, 3)
      << "x RANDOM), accuracy " << fmt(acc);
  }
  return {ok, d.str()};
}

Outcome criterion_redundancy() {
  smi::ScenarioParams sp;
  sp.kind = smi::ScenarioKind::kRedundancy;
  const Sweep sw = run_sweep(sp, {"RANDOM", "ENTROPY", "FLCG", "LOGDETCG"}, 5, 5, 500);
  bool ok = true;
  std::ostringstream d;
  d << "mean cumulative unique originals per round:";
  for (const std::string m : {"RANDOM", "ENTROPY", "FLCG", "LOGDETCG"}) {
    d << " " << m << " [";
    for (std::size_t r = 0; r < 5; ++r) {
      d << (r ? " " : "") << mean_at_round(sw.at(m), r, &smi::RoundRecord::unique_selected);
    }
    d << "]";
  }
  for (const std::string m : {"FLCG", "LOGDETCG"}) {
    for (std::size_t r = 1; r < 5; ++r) {
      const double v = mean_at_round(sw.at(m), r, &smi::RoundRecord::unique_selected);
      for (const std::string base : {"RANDOM", "ENTROPY"}) {
        ok = ok && v > mean_at_round(sw.at(base), r, &smi::RoundRecord::unique_selected);
      }
    }
  }
  return {ok, d.str()};
}

double final_accuracy_sd(const std::vector<smi::RunResult>& runs) {
  std::vector<double> acc;
  for (const auto& r : runs) acc.push_back(r.records.back().accuracy);
  const double mean = std::accumulate(acc.begin(), acc.end(), 0.0) / acc.size();
  double ss = 0.0;
  for (double a : acc) ss += (a - mean) * (a - mean);
  return std::sqrt(ss / static_cast<double>(acc.size() - 1));
}

Outcome criterion_ood() {
  smi::ScenarioParams sp;
  sp.kind = smi::ScenarioKind::kOod;
  const Sweep sw = run_sweep(sp, {"RANDOM", "ENTROPY", "FLCMI", "LOGDETCMI"}, 5, 5, 250);
  auto id_mean = [&](const std::string& m) {
    return mean_over_records(sw.at(m), [](const smi::RoundRecord& rec) {
      return static_cast<double>(rec.id_selected.value_or(0));
    });
  };
  bool ok = true;
  std::ostringstream d;
  d << "ID selected per round RANDOM " << fmt(id_mean("RANDOM")) << ", ENTROPY "
    << fmt(id_mean("ENTROPY")) << "; final accuracy sd ENTROPY "
    << fmt(final_accuracy_sd(sw.at("ENTROPY")), 3);
  for (const std::string m : {"FLCMI", "LOGDETCMI"}) {
    const double id = id_mean(m);
    const double sd = final_accuracy_sd(sw.at(m));
    const bool id_ok = id > id_mean("RANDOM");
    const bool sd_ok = sd <= final_accuracy_sd(sw.at("ENTROPY"));
    ok = ok && id_ok && sd_ok;
    d << "; " << m << " ID " << fmt(id) << (id_ok ? "" : " (not above RANDOM)") << ", sd "
      << fmt(sd, 3) << (sd_ok ? "" : " (above ENTROPY)");
  }
  return {ok, d.str()};
}

Outcome criterion_penalty() {
  std::ifstream in(std::filesystem::path(SMI_FIXTURE_DIR) / "penalty_fixture.json");
  if (!in) return {false, "fixture not found"};
  const nlohmann::json f = nlohmann::json::parse(in);
  const auto methods = f["methods"].get<std::vector<std::string>>();
  const auto traces = f["traces"].get<std::vector<smi::Trace>>();
  const smi::PenaltyMatrix m = smi::penalty_matrix(methods, traces, f["alpha"].get<double>());
  const auto cells = f["cells"].get<std::vector<std::vector<double>>>();
  double fixture_err = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      fixture_err = std::max(fixture_err, std::abs(m.cells(static_cast<Eigen::Index>(i),
                                                           static_cast<Eigen::Index>(j)) -
                                                   cells[i][j]));
    }
  }

  // Random traces with a per-method drift: check cell granularity and pair sums.
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.02);
  int property_failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 4, seeds = 4, rounds = 7;
    std::vector<std::string> names;
    std::vector<smi::Trace> t(k, smi::Trace(seeds, std::vector<double>(rounds)));
    for (int i = 0; i < k; ++i) {
      names.push_back("m" + std::to_string(i));
      for (auto& row : t[i]) {
        for (int r = 0; r < rounds; ++r) row[r] = 0.5 + 0.01 * i * (trial % 3) + noise(rng);
      }
    }
    const smi::PenaltyMatrix pm = smi::penalty_matrix(names, t);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        const double scaled = pm.cells(i, j) * rounds;
        if (std::abs(scaled - std::round(scaled)) > 1e-12) ++property_failures;
        if (pm.cells(i, j) + pm.cells(j, i) > 1.0 + 1e-12) ++property_failures;
      }
    }
  }
  return {fixture_err <= 1e-12 && property_failures == 0,
          "fixture max error " + fmt(fixture_err, 3) + ", property violations " +
              std::to_string(property_failures)};
}

Outcome criterion_scale() {
  std::ostringstream d;
  bool ok = true;
  {
    const smi::FunctionKind kind = smi::FunctionKind::kFLQMI;
    const std::size_t n = 100000;
    const auto start = std::chrono::steady_clock::now();
    const smi::EmbeddingMatrix u = normal_rows(n, 32, 9);
    const smi::EmbeddingMatrix q = normal_rows(50, 32, 10);
    const smi::EmbeddingMatrix p = normal_rows(1, 32, 11);
    const auto f =
        smi::make_function(kind, chunk_blocks(kind, shared_blocks(kind, q, p), u, q, p));
    smi::GreedyConfig cfg;
    cfg.budget = 1000;
    cfg.variant = smi::auto_greedy_variant(kind, n);
    const smi::SelectionResult r = smi::greedy_select(*f, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool part = secs < 60.0 && r.chosen.size() == 1000;
    ok = ok && part;
    d << "FLQMI n=100000 q=50 B=1000 (" << smi::to_string(cfg.variant) << "): " << fmt(secs, 3)
      << " s, " << r.chosen.size() << " picks" << (part ? "" : " (limit 60 s)");
  }
  {
    const smi::FunctionKind kind = smi::FunctionKind::kLogDetMI;
    const std::size_t n = 50000;
    const auto start = std::chrono::steady_clock::now();
    const smi::EmbeddingMatrix u = normal_rows(n, 32, 12);
    const smi::EmbeddingMatrix q = normal_rows(50, 32, 13);
    const smi::EmbeddingMatrix p = normal_rows(1, 32, 14);
    const smi::KernelBlocks shared = shared_blocks(kind, q, p);
    smi::FunctionParams params;
    params.cache = smi::make_conditioning_cache();
    const smi::ChunkFactory factory = [&](std::span<const Index> chunk) {
      return smi::make_function(kind, chunk_blocks(kind, shared, u.select(chunk), q, p), params);
    };
    smi::GreedyConfig cfg;
    cfg.budget = 1000;
    cfg.partitions = 50;
    cfg.variant = smi::auto_greedy_variant(kind, n / cfg.partitions);
    const smi::SelectionResult r = smi::partitioned_select(n, factory, cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::set<Index> distinct(r.chosen.begin(), r.chosen.end());
    const bool part = secs < 300.0 && r.chosen.size() == 1000 && distinct.size() == 1000;
    ok = ok && part;
    d << "; LOGDETMI n=50000 p=50 B=1000 (" << smi::to_string(cfg.variant)
      << "): " << fmt(secs, 3) << " s, " << distinct.size() << " distinct picks"
      << (part ? "" : " (limit 300 s, 1000 distinct)");
  }
  return {ok, d.str()};
}

Outcome criterion_gradient() {
  const int c = 10, d = 32;
  std::mt19937_64 rng(15);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd w(c, d + 1);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.3 * normal(rng);
  const smi::SurrogateModel m(w);
  const double h = 1e-6;
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    smi::Features x(1, d);
    for (int j = 0; j < d; ++j) x(0, j) = normal(rng);
    const std::vector<int> y = {point % c};
    const std::vector<smi::PointId> id = {point};
    const smi::EmbeddingMatrix e = smi::gradient_embeddings(m, x, y, id);
    const std::vector<double> xv(x.data(), x.data() + d);
    for (int k = 0; k < c; ++k) {
      for (int j = 0; j <= d; ++j) {
        Eigen::MatrixXd plus = w, minus = w;
        plus(k, j) += h;
        minus(k, j) -= h;
        const double numeric =
            (smi::point_loss(plus, xv, y[0]) - smi::point_loss(minus, xv, y[0])) / (2 * h);
        const double analytic = e.row(0)[static_cast<std::size_t>(k * (d + 1) + j)];
        worst = std::max(worst, std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric)));
      }
    }
  }
  return {worst <= 1e-5, "20 points x " + std::to_string(c * (d + 1)) +
                             " coordinates, max relative error " + fmt(worst, 3)};
}

std::vector<Criterion> criteria() {
  return {
      {1, "closed forms match definitional composites", 30, criterion_oracle},
      {2, "SCMI reductions", 10, criterion_reductions},
      {3, "greedy approximation bound and lazy identity", 60, criterion_greedy_bound},
      {4, "stochastic greedy quality and speed", 120, criterion_stochastic},
      {5, "rare-class direction", 600, criterion_rare},
      {6, "redundancy direction", 600, criterion_redundancy},
      {7, "out-of-distribution direction", 900, criterion_ood},
      {8, "penalty matrix fidelity", 1, criterion_penalty},
      {9, "scalability", 360, criterion_scale},
      {10, "gradient embeddings vs finite differences", 1, criterion_gradient},
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criterion numbers to run (default: all)")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all_passed = true;
  for (const Criterion& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.limit_seconds) {
      out.passed = false;
      out.detail += "; exceeded " + fmt(c.limit_seconds) + " s";
    }
    std::cout << (out.passed ? "[PASS]" : "[FAIL]") << " criterion " << c.id << " (" << c.name
              << "): " << out.detail << " [" << std::fixed << std::setprecision(2) << secs
              << " s]" << std::defaultfloat << std::endl;
    all_passed = all_passed && out.passed;
  }
  return all_passed ? 0 : 1;
}
