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

// smi: run, sweep, verify and bench entry points.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "smi/errors.hpp"
#include "smi/greedy.hpp"
#include "smi/harness.hpp"
#include "smi/kernel_io.hpp"
#include "smi/penalty.hpp"
#include "smi/random.hpp"
#include "smi/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerify = 4;

struct Overrides {
  std::string config;
  std::string method;
  std::string scenario;
  std::string optimizer;
  std::size_t budget = 0;
  std::size_t partitions = 0;
  bool partitions_set = false;
  double sg_epsilon = 0.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int rounds = 0;
  std::string out;
};

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app->add_option("--method,--function", o.method, "function kind or baseline");
  app->add_option("--scenario", o.scenario, "standard | rare | redundancy | ood");
  app->add_option("--optimizer", o.optimizer, "auto | naive | lazy | stochastic");
  app->add_option("--budget", o.budget, "points labeled per round");
  app->add_option("--partitions", o.partitions, "random partitions of U (0 = auto)")
      ->each([&o](const std::string&) { o.partitions_set = true; });
  app->add_option("--sg-epsilon", o.sg_epsilon, "stochastic greedy epsilon");
  app->add_option("--seed", o.seed, "run seed")->each([&o](const std::string&) {
    o.seed_set = true;
  });
  app->add_option("--rounds", o.rounds, "selection rounds");
  app->add_option("--out", o.out, "output directory");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw smi::ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

smi::RunConfig load_config(const Overrides& o) {
  smi::RunConfig c = o.config.empty() ? smi::RunConfig{} : smi::parse_run_config(read_file(o.config));
  if (!o.method.empty()) c.method = o.method;
  if (!o.scenario.empty()) {
    auto kind = smi::parse_scenario_kind(o.scenario);
    if (!kind) throw smi::ConfigError("unknown scenario '" + o.scenario + "'");
    c.scenario.kind = *kind;
  }
  if (!o.optimizer.empty()) c.optimizer.variant = o.optimizer;
  if (o.budget > 0) c.budget = o.budget;
  if (o.partitions_set) c.optimizer.partitions = o.partitions;
  if (o.sg_epsilon > 0.0) c.optimizer.epsilon = o.sg_epsilon;
  if (o.seed_set) c.seed = o.seed;
  if (o.rounds > 0) c.rounds = o.rounds;
  if (!o.out.empty()) c.output_dir = o.out;
  if (c.output_dir.empty()) c.output_dir = "results";
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text << "\n";
}

// Runs one config into `dir`: rounds.jsonl (flushed per round),
// summary.json and the final weights.
smi::RunResult run_into(const smi::RunConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream jsonl(dir / "rounds.jsonl");
  if (!jsonl) throw std::runtime_error("cannot write " + (dir / "rounds.jsonl").string());
  const auto start = std::chrono::steady_clock::now();
  smi::RunResult result = smi::run_al(config, [&](const smi::RoundRecord& r) {
    jsonl << smi::round_record_json(r) << "\n";
    jsonl.flush();
  });
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(dir / "summary.json", smi::summary_json(config, result, elapsed));
  smi::write_weights_csv(result.final_model, dir / "weights.csv");
  return result;
}

int cmd_run(const Overrides& o, const std::string& dump_kernel) {
  const smi::RunConfig config = load_config(o);
  if (!dump_kernel.empty()) {
    smi::save_kernel(dump_kernel, smi::initial_kernel(config));
    std::cout << "kernel written to " << dump_kernel << "\n";
  }
  const smi::RunResult result = run_into(config, config.output_dir);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  const auto& last = result.records.back();
  std::cout << config.method << ": " << result.records.size() << " rounds, final accuracy "
            << last.accuracy;
  if (last.rare_accuracy) std::cout << ", rare accuracy " << *last.rare_accuracy;
  std::cout << ", results in " << config.output_dir.string() << "\n";
  return kExitOk;
}

// Greedy selection on a kernel file: FL, GC and LOGDET read only the ground
// block.
int cmd_select(const std::string& kernel_path, const std::string& function,
               const Overrides& o) {
  const auto kind = smi::parse_function_kind(function);
  if (!kind || smi::required_blocks(*kind) != smi::kGroundBlock) {
    throw smi::ConfigError("--load-kernel needs FL, GC or LOGDET");
  }
  smi::KernelBlocks blocks;
  blocks.ground = std::make_shared<const smi::SimilarityKernel>(smi::load_kernel(kernel_path));
  const auto f = smi::make_function(*kind, blocks);
  smi::GreedyConfig cfg;
  cfg.budget = o.budget > 0 ? o.budget : 10;
  if (!o.optimizer.empty() && o.optimizer != "auto") {
    auto v = smi::parse_greedy_variant(o.optimizer);
    if (!v) throw smi::ConfigError("unknown optimizer '" + o.optimizer + "'");
    cfg.variant = *v;
  }
  if (o.sg_epsilon > 0.0) cfg.epsilon = o.sg_epsilon;
  cfg.seed = o.seed;
  const smi::SelectionResult r = smi::greedy_select(*f, cfg);
  json j;
  j["function"] = smi::to_string(*kind);
  j["chosen"] = r.chosen;
  j["gains"] = r.gains;
  j["value"] = r.value;
  j["evaluations"] = r.evaluations;
  std::cout << j.dump() << "\n";
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_sweep(const Overrides& o, const std::string& methods_arg, int seeds,
              const std::string& metric, double alpha, std::size_t jobs) {
  const smi::RunConfig base = load_config(o);
  const std::vector<std::string> methods = split_list(methods_arg);
  if (methods.size() < 2) throw smi::ConfigError("--methods needs at least two entries");
  if (seeds < 2) throw smi::ConfigError("--seeds must be >= 2");
  if (metric != "accuracy" && metric != "rare_accuracy") {
    throw smi::ConfigError("--metric must be accuracy or rare_accuracy");
  }
  struct Job {
    std::size_t method;
    int seed;
  };
  std::vector<Job> queue;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (int s = 0; s < seeds; ++s) queue.push_back({m, s});
  }
  std::vector<smi::Trace> traces(methods.size(), smi::Trace(seeds));
  std::vector<std::exception_ptr> errors(queue.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < queue.size(); k = next++) {
      try {
        smi::RunConfig c = base;
        c.method = methods[queue[k].method];
        c.seed = base.seed + static_cast<std::uint64_t>(queue[k].seed);
        const fs::path dir =
            base.output_dir / methods[queue[k].method] / ("seed_" + std::to_string(c.seed));
        const smi::RunResult r = run_into(c, dir);
        std::vector<double> trace;
        for (const auto& rec : r.records) {
          trace.push_back(metric == "accuracy" ? rec.accuracy : rec.rare_accuracy.value_or(0.0));
        }
        traces[queue[k].method][queue[k].seed] = std::move(trace);
        std::lock_guard<std::mutex> lock(log_mutex);
        std::cout << "done " << c.method << " seed " << c.seed << "\n";
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(
      jobs == 0 ? std::thread::hardware_concurrency() : jobs, 1, queue.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  const smi::PenaltyMatrix pm = smi::penalty_matrix(methods, traces, alpha);
  fs::create_directories(base.output_dir);
  smi::write_penalty_csv(pm, base.output_dir / "penalty.csv");
  std::cout << "penalty matrix (" << metric << ", alpha " << alpha << ", " << pm.rounds
            << " rounds):\n";
  for (std::size_t i = 0; i < methods.size(); ++i) {
    std::cout << std::setw(12) << methods[i];
    for (std::size_t j = 0; j < methods.size(); ++j) {
      std::cout << " " << std::fixed << std::setprecision(3) << pm.cells(i, j);
    }
    std::cout << "  row sum " << pm.cells.row(i).sum() << "\n";
  }
  return kExitOk;
}

int cmd_verify(bool quick, std::uint64_t seed) {
  bool ok = true;
  for (const smi::CheckResult& r : smi::run_verification(quick, seed)) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << " ("
              << std::fixed << std::setprecision(2) << r.seconds << " s)\n";
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitVerify;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(s)) {
    try {
      out.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw smi::ConfigError("bad size '" + item + "'");
    }
  }
  return out;
}

int cmd_bench(const std::string& function, const std::string& ns, const std::string& budgets,
              const std::string& parts, const Overrides& o, std::size_t query_size, int dim) {
  const auto kind = smi::parse_function_kind(function);
  if (!kind) throw smi::ConfigError("unknown function '" + function + "'");
  const unsigned need = smi::required_blocks(*kind);
  const double eps = smi::is_log_det(*kind) ? smi::kLogDetRegularization : 0.0;
  std::cout << std::left << std::setw(10) << "n" << std::setw(8) << "B" << std::setw(6) << "p"
            << std::setw(12) << "variant" << std::setw(12) << "seconds" << "evaluations\n";
  for (std::size_t n : parse_sizes(ns)) {
    std::mt19937_64 rng(smi::derive_seed(o.seed, n));
    std::normal_distribution<double> normal;
    auto random_rows = [&](std::size_t rows) {
      std::vector<double> v(rows * dim);
      for (double& x : v) x = normal(rng);
      return smi::EmbeddingMatrix(rows, dim, std::move(v));
    };
    const smi::EmbeddingMatrix u = random_rows(n);
    const smi::EmbeddingMatrix q = random_rows(query_size);
    const smi::EmbeddingMatrix p = random_rows(query_size);
    smi::KernelBlocks shared;
    if (need & smi::kQueryBlock) {
      shared.query = std::make_shared<const smi::SimilarityKernel>(
          smi::regularize(smi::cosine_kernel(q), eps));
    }
    if (need & smi::kCondBlock) {
      shared.cond = std::make_shared<const smi::SimilarityKernel>(
          smi::regularize(smi::cosine_kernel(p), eps));
    }
    if (need & smi::kQueryCondBlock) {
      shared.query_cond = std::make_shared<const smi::SimilarityKernel>(smi::cosine_kernel(q, p));
    }
    for (std::size_t budget : parse_sizes(budgets)) {
      for (std::size_t partitions : parse_sizes(parts)) {
        smi::FunctionParams params;
        params.cache = smi::make_conditioning_cache();
        smi::ChunkFactory factory = [&](std::span<const smi::Index> chunk) {
          const smi::EmbeddingMatrix c = u.select(chunk);
          smi::KernelBlocks b = shared;
          if (need & smi::kGroundBlock) {
            b.ground = std::make_shared<const smi::SimilarityKernel>(
                smi::regularize(smi::cosine_kernel(c), eps));
          }
          if (need & smi::kGroundQueryBlock) {
            b.ground_query =
                std::make_shared<const smi::SimilarityKernel>(smi::cosine_kernel(c, q));
          }
          if (need & smi::kGroundCondBlock) {
            b.ground_cond = std::make_shared<const smi::SimilarityKernel>(smi::cosine_kernel(c, p));
          }
          return smi::make_function(*kind, b, params);
        };
        smi::GreedyConfig cfg;
        cfg.budget = budget;
        cfg.partitions = partitions;
        cfg.seed = o.seed;
        cfg.variant = smi::auto_greedy_variant(*kind, (n + partitions - 1) / partitions);
        if (!o.optimizer.empty() && o.optimizer != "auto") {
          auto v = smi::parse_greedy_variant(o.optimizer);
          if (!v) throw smi::ConfigError("unknown optimizer '" + o.optimizer + "'");
          cfg.variant = *v;
        }
        if (o.sg_epsilon > 0.0) cfg.epsilon = o.sg_epsilon;
        const smi::SelectionResult r = smi::partitioned_select(n, factory, cfg);
        std::cout << std::left << std::setw(10) << n << std::setw(8) << budget << std::setw(6)
                  << partitions << std::setw(12) << smi::to_string(cfg.variant) << std::setw(12)
                  << std::fixed << std::setprecision(3) << r.elapsed_seconds << r.evaluations
                  << "\n";
      }
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular information measures for batch active learning"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string dump_kernel;
  std::string load_kernel;
  auto* run = app.add_subcommand("run", "one configuration: rounds JSONL plus summary");
  add_overrides(run, run_o);
  run->add_option("--dump-kernel", dump_kernel, "write the first-round kernel (SIMK format)");
  run->add_option("--load-kernel", load_kernel,
                  "select on a kernel file instead of running (FL, GC, LOGDET)")
      ->check(CLI::ExistingFile);

  Overrides sweep_o;
  std::string methods = "RANDOM,ENTROPY,FLQMI";
  int seeds = 3;
  std::string metric = "accuracy";
  double alpha = 0.05;
  std::size_t jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "method grid over seeds: penalty matrix CSV");
  add_overrides(sweep, sweep_o);
  sweep->add_option("--methods", methods, "comma-separated methods");
  sweep->add_option("--seeds", seeds, "seeds per method (>= 2)");
  sweep->add_option("--metric", metric, "accuracy | rare_accuracy");
  sweep->add_option("--alpha", alpha, "two-tailed significance level");
  sweep->add_option("--jobs", jobs, "concurrent runs (0 = hardware)");

  bool quick = false;
  std::uint64_t verify_seed = 20260101;
  auto* verify = app.add_subcommand("verify", "brute-force oracle suites");
  verify->add_flag("--quick", quick, "a tenth of the instances");
  verify->add_option("--seed", verify_seed, "suite seed");

  Overrides bench_o;
  std::string bench_fn = "FLQMI";
  std::string bench_n = "1000,10000";
  std::string bench_b = "100";
  std::string bench_p = "1";
  std::size_t bench_q = 50;
  int bench_dim = 32;
  auto* bench = app.add_subcommand("bench", "selection timing over n, B, p grids");
  bench->add_option("--function", bench_fn, "function kind");
  bench->add_option("--n", bench_n, "comma-separated ground sizes");
  bench->add_option("--budget", bench_b, "comma-separated budgets");
  bench->add_option("--partitions", bench_p, "comma-separated partition counts");
  bench->add_option("--query-size", bench_q, "|Q| and |P|");
  bench->add_option("--dim", bench_dim, "embedding dimension");
  bench->add_option("--optimizer", bench_o.optimizer, "naive | lazy | stochastic");
  bench->add_option("--sg-epsilon", bench_o.sg_epsilon, "stochastic greedy epsilon");
  bench->add_option("--seed", bench_o.seed, "data seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      if (!load_kernel.empty()) return cmd_select(load_kernel, run_o.method, run_o);
      return cmd_run(run_o, dump_kernel);
    }
    if (*sweep) return cmd_sweep(sweep_o, methods, seeds, metric, alpha, jobs);
    if (*verify) return cmd_verify(quick, verify_seed);
    if (*bench) return cmd_bench(bench_fn, bench_n, bench_b, bench_p, bench_o, bench_q, bench_dim);
  } catch (const smi::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const smi::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
