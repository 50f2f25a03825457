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

#include "smi/greedy.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace smi {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Returns false when the selection should stop.
bool take(const InfoFunction& f, SelectionState& state, Index x, double best,
          const GreedyConfig& cfg, SelectionResult& out) {
  if (cfg.stop_on_negative && best < 0.0) return false;
  out.chosen.push_back(x);
  out.gains.push_back(f.commit(state, x));
  return true;
}

void run_naive(const InfoFunction& f, SelectionState& state, std::size_t budget,
               const GreedyConfig& cfg, SelectionResult& out) {
  const std::size_t n = f.ground_size();
  for (std::size_t step = 0; step < budget; ++step) {
    Index best_x = n;
    double best = 0.0;
    for (Index x = 0; x < n; ++x) {
      if (state.contains(x)) continue;
      const double g = f.gain(state, x);
      ++out.evaluations;
      if (best_x == n || g > best) {
        best = g;
        best_x = x;
      }
    }
    if (!take(f, state, best_x, best, cfg, out)) return;
  }
}

struct Bound {
  double value;
  Index x;
  std::size_t fresh_at;
};

struct BoundOrder {
  // Max-heap on value, lower index first among equals.
  bool operator()(const Bound& a, const Bound& b) const {
    if (a.value != b.value) return a.value < b.value;
    return a.x > b.x;
  }
};

void run_lazy(const InfoFunction& f, SelectionState& state, std::size_t budget,
              const GreedyConfig& cfg, SelectionResult& out) {
  const std::size_t n = f.ground_size();
  std::vector<Bound> init;
  init.reserve(n);
  for (Index x = 0; x < n; ++x) {
    init.push_back({f.gain(state, x), x, 0});
    ++out.evaluations;
  }
  std::priority_queue<Bound, std::vector<Bound>, BoundOrder> heap(BoundOrder{},
                                                                  std::move(init));
  for (std::size_t step = 0; step < budget; ++step) {
    while (true) {
      Bound top = heap.top();
      heap.pop();
      if (top.fresh_at == step) {
        if (!take(f, state, top.x, top.value, cfg, out)) return;
        break;
      }
      top.value = f.gain(state, top.x);
      top.fresh_at = step;
      ++out.evaluations;
      heap.push(top);
    }
  }
}

void run_stochastic(const InfoFunction& f, SelectionState& state, std::size_t budget,
                    const GreedyConfig& cfg, SelectionResult& out) {
  const std::size_t n = f.ground_size();
  const std::size_t s = stochastic_sample_size(n, budget, cfg.epsilon);
  std::mt19937_64 rng(cfg.seed);
  std::vector<Index> remaining(n);
  std::iota(remaining.begin(), remaining.end(), Index{0});
  for (std::size_t step = 0; step < budget; ++step) {
    const std::size_t m = remaining.size();
    const std::size_t draw = std::min(s, m);
    // Partial Fisher-Yates: the first `draw` slots become the sample.
    for (std::size_t i = 0; i < draw; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, m - 1);
      std::swap(remaining[i], remaining[pick(rng)]);
    }
    std::size_t best_slot = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < draw; ++i) {
      const double g = f.gain(state, remaining[i]);
      ++out.evaluations;
      if (i == 0 || g > best || (g == best && remaining[i] < remaining[best_slot])) {
        best = g;
        best_slot = i;
      }
    }
    const Index x = remaining[best_slot];
    if (!take(f, state, x, best, cfg, out)) return;
    remaining[best_slot] = remaining.back();
    remaining.pop_back();
  }
}

void validate(const GreedyConfig& cfg) {
  if (cfg.budget == 0) throw std::invalid_argument("greedy: budget must be positive");
  if (cfg.variant == GreedyVariant::kStochastic &&
      !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw std::invalid_argument("greedy: epsilon must lie in (0, 1)");
  }
  if (cfg.partitions == 0) throw std::invalid_argument("greedy: partitions must be >= 1");
}

}  // namespace

std::string_view to_string(GreedyVariant v) {
  switch (v) {
    case GreedyVariant::kNaive: return "naive";
    case GreedyVariant::kLazy: return "lazy";
    case GreedyVariant::kStochastic: return "stochastic";
  }
  return "?";
}

std::optional<GreedyVariant> parse_greedy_variant(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "naive") return GreedyVariant::kNaive;
  if (lower == "lazy") return GreedyVariant::kLazy;
  if (lower == "stochastic") return GreedyVariant::kStochastic;
  return std::nullopt;
}

GreedyVariant auto_greedy_variant(FunctionKind kind, std::size_t candidates) {
  if (candidates > kStochasticThreshold) return GreedyVariant::kStochastic;
  if (!is_submodular(kind)) return GreedyVariant::kNaive;
  return GreedyVariant::kLazy;
}

std::size_t stochastic_sample_size(std::size_t n, std::size_t budget, double epsilon) {
  if (budget == 0 || n == 0) return 0;
  const double s = std::ceil(static_cast<double>(n) / static_cast<double>(budget) *
                             std::log(1.0 / epsilon));
  return std::clamp<std::size_t>(static_cast<std::size_t>(s), 1, n);
}

std::vector<std::size_t> partition_quotas(std::size_t budget, std::size_t partitions) {
  if (partitions == 0) throw std::invalid_argument("partition_quotas: p must be >= 1");
  std::vector<std::size_t> q(partitions, budget / partitions);
  for (std::size_t c = 0; c < budget % partitions; ++c) ++q[c];
  return q;
}

SelectionResult greedy_select(const InfoFunction& f, const GreedyConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  SelectionResult out;
  const std::size_t n = f.ground_size();
  if (n == 0) throw std::invalid_argument("greedy: empty ground set");
  std::size_t budget = cfg.budget;
  if (budget > n) {
    out.warnings.push_back("budget " + std::to_string(budget) + " exceeds ground size " +
                           std::to_string(n) + "; selecting all");
    budget = n;
  }
  SelectionState state = f.make_state();
  switch (cfg.variant) {
    case GreedyVariant::kNaive: run_naive(f, state, budget, cfg, out); break;
    case GreedyVariant::kLazy: run_lazy(f, state, budget, cfg, out); break;
    case GreedyVariant::kStochastic: run_stochastic(f, state, budget, cfg, out); break;
  }
  out.value = state.value();
  out.numerical_warnings = state.numerical_warnings();
  out.elapsed_seconds = seconds_since(start);
  return out;
}

SelectionResult partitioned_select(std::size_t ground_size, const ChunkFactory& factory,
                                   const GreedyConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  if (ground_size == 0) throw std::invalid_argument("partitioned_select: empty ground set");
  SelectionResult out;
  std::size_t budget = cfg.budget;
  if (budget > ground_size) {
    out.warnings.push_back("budget " + std::to_string(budget) + " exceeds ground size " +
                           std::to_string(ground_size) + "; selecting all");
    budget = ground_size;
  }
  const std::size_t p = cfg.partitions;
  if (p > budget) {
    throw std::invalid_argument("partitioned_select: " + std::to_string(p) +
                                " partitions exceed budget " + std::to_string(budget));
  }

  std::vector<Index> order(ground_size);
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(order.begin(), order.end(), rng);

  const std::vector<std::size_t> quotas = partition_quotas(budget, p);
  std::vector<std::vector<Index>> chunks(p);
  std::size_t offset = 0;
  for (std::size_t c = 0; c < p; ++c) {
    const std::size_t size = ground_size / p + (c < ground_size % p ? 1 : 0);
    chunks[c].assign(order.begin() + offset, order.begin() + offset + size);
    std::sort(chunks[c].begin(), chunks[c].end());
    offset += size;
  }
  for (std::size_t c = 0; c < p; ++c) {
    if (chunks[c].size() < quotas[c]) {
      std::ostringstream msg;
      msg << "partitioned_select: chunk sizes/quotas";
      for (std::size_t k = 0; k < p; ++k) msg << " " << chunks[k].size() << "/" << quotas[k];
      throw std::invalid_argument(msg.str());
    }
  }

  std::vector<SelectionResult> results(p);
  std::vector<std::exception_ptr> errors(p);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < p; c = next++) {
      try {
        auto f = factory(chunks[c]);
        GreedyConfig sub = cfg;
        sub.budget = quotas[c];
        sub.seed = cfg.seed + c;
        sub.partitions = 1;
        results[c] = greedy_select(*f, sub);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  std::size_t threads = cfg.threads == 0 ? std::thread::hardware_concurrency() : cfg.threads;
  threads = std::clamp<std::size_t>(threads, 1, p);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t c = 0; c < p; ++c) {
    const SelectionResult& r = results[c];
    for (std::size_t k = 0; k < r.chosen.size(); ++k) {
      out.chosen.push_back(chunks[c][r.chosen[k]]);
      out.gains.push_back(r.gains[k]);
    }
    out.value += r.value;
    out.evaluations += r.evaluations;
    out.numerical_warnings += r.numerical_warnings;
    for (const auto& w : r.warnings) out.warnings.push_back("chunk " + std::to_string(c) + ": " + w);
  }
  out.elapsed_seconds = seconds_since(start);
  return out;
}

SelectionResult exhaustive_opt(const InfoFunction& f, std::size_t budget) {
  const auto start = Clock::now();
  const std::size_t n = f.ground_size();
  if (budget == 0 || budget > n) {
    throw std::invalid_argument("exhaustive_opt: budget must lie in [1, n]");
  }
  double count = 1.0;
  for (std::size_t i = 0; i < budget; ++i) {
    count = count * static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  if (count > 1e6) {
    throw std::invalid_argument("exhaustive_opt: more than 1e6 subsets");
  }
  SelectionResult out;
  std::vector<Index> combo(budget);
  std::iota(combo.begin(), combo.end(), Index{0});
  std::vector<Index> best_combo;
  double best = 0.0;
  while (true) {
    const double v = f.evaluate(combo);
    ++out.evaluations;
    if (best_combo.empty() || v > best) {
      best = v;
      best_combo = combo;
    }
    std::size_t i = budget;
    while (i > 0 && combo[i - 1] == n - budget + i - 1) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < budget; ++j) combo[j] = combo[j - 1] + 1;
  }
  SelectionState state = f.make_state();
  for (Index x : best_combo) {
    out.chosen.push_back(x);
    out.gains.push_back(f.commit(state, x));
  }
  out.value = best;
  out.numerical_warnings = state.numerical_warnings();
  out.elapsed_seconds = seconds_since(start);
  return out;
}

}  // namespace smi
