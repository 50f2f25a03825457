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

//
// Graph-cut family.
//
//   GC(A)   = sum_{i in U, j in A} S_ij - lambda * sum_{i, j in A} S_ij
//   GCMI(A) = 2 lambda sum_{i in A, j in Q} S_ij
//   GCCG(A) = GC(A) - 2 lambda sum_{i in A, j in P} S_ij
//
// With lambda = 1 these are the textbook instantiations. GCMI is modular, so
// its gains never change; GC and GCCG keep the running cross sums
// sum_{j in A} S_xj for every x.
//

#include <memory>

#include "function_impls.hpp"

namespace smi::detail {
namespace {

struct CrossSumMemo final : SelectionState::Memo {
  std::vector<double> to_selection;
  explicit CrossSumMemo(std::size_t n) : to_selection(n, 0.0) {}
  std::unique_ptr<Memo> clone() const override {
    return std::make_unique<CrossSumMemo>(*this);
  }
};

struct NoMemo final : SelectionState::Memo {
  std::unique_ptr<Memo> clone() const override { return std::make_unique<NoMemo>(); }
};

double row_sum(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v;
  return s;
}

class GraphCutFamily final : public InfoFunction {
 public:
  GraphCutFamily(FunctionKind kind, const KernelBlocks& b, double lambda)
      : InfoFunction(kind, kind == FunctionKind::kGCMI ? b.ground_query->rows()
                                                       : b.ground->rows()),
        blocks_(b),
        lambda_(lambda),
        coverage_(ground_size(), 0.0),
        penalty_(ground_size(), 0.0) {
    const std::size_t n = ground_size();
    if (kind == FunctionKind::kGCMI) {
      for (std::size_t x = 0; x < n; ++x) {
        coverage_[x] = 2.0 * lambda_ * row_sum(b.ground_query->row(x));
      }
      return;
    }
    for (std::size_t x = 0; x < n; ++x) {
      coverage_[x] = row_sum(b.ground->row(x)) - lambda_ * (*b.ground)(x, x);
    }
    if (kind == FunctionKind::kGCCG) {
      for (std::size_t x = 0; x < n; ++x) {
        penalty_[x] = 2.0 * lambda_ * row_sum(b.ground_cond->row(x));
      }
    }
  }

  double evaluate(std::span<const Index> subset) const override {
    check_subset(subset);
    if (kind() == FunctionKind::kGCMI) {
      double s = 0.0;
      for (Index i : subset) {
        for (double v : blocks_.ground_query->row(i)) s += v;
      }
      return 2.0 * lambda_ * s;
    }
    const SimilarityKernel& k = *blocks_.ground;
    double coverage = 0.0;
    for (std::size_t i = 0; i < ground_size(); ++i) {
      for (Index j : subset) coverage += k(i, j);
    }
    double internal = 0.0;
    for (Index i : subset) {
      for (Index j : subset) internal += k(i, j);
    }
    double value = coverage - lambda_ * internal;
    if (kind() == FunctionKind::kGCCG) {
      double cross = 0.0;
      for (Index i : subset) {
        for (double v : blocks_.ground_cond->row(i)) cross += v;
      }
      value -= 2.0 * lambda_ * cross;
    }
    return value;
  }

 protected:
  std::unique_ptr<SelectionState::Memo> initial_memo() const override {
    if (kind() == FunctionKind::kGCMI) return std::make_unique<NoMemo>();
    return std::make_unique<CrossSumMemo>(ground_size());
  }

  double memo_gain(SelectionState::Memo& memo, std::span<const Index>,
                   Index x) const override {
    if (kind() == FunctionKind::kGCMI) return coverage_[x];
    const auto& acc = static_cast<CrossSumMemo&>(memo).to_selection;
    return coverage_[x] - 2.0 * lambda_ * acc[x] - penalty_[x];
  }

  CommitOutcome memo_commit(SelectionState::Memo& memo,
                            std::span<const Index> chosen,
                            Index x) const override {
    const double g = memo_gain(memo, chosen, x);
    if (kind() != FunctionKind::kGCMI) {
      auto& acc = static_cast<CrossSumMemo&>(memo).to_selection;
      const auto row = blocks_.ground->row(x);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += row[i];
    }
    return {g, 0};
  }

 private:
  KernelBlocks blocks_;
  double lambda_;
  // Gain of x from the empty set, before the conditioning penalty.
  std::vector<double> coverage_;
  std::vector<double> penalty_;
};

}  // namespace

std::shared_ptr<const InfoFunction> make_graph_cut(FunctionKind kind,
                                                   const KernelBlocks& b,
                                                   double lambda) {
  return std::make_shared<const GraphCutFamily>(kind, b, lambda);
}

}  // namespace smi::detail
