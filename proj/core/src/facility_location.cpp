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
// Facility-location family: FL, FLVMI, FLCG, FLCMI, plus FLQMI and DIV_GCMI.
//
// FL, FLVMI, FLCG and FLCMI all have the shape
//   sum_{i in U} h_i(max_{j in A} S_ij),  h_i(s) = max(min(s, cap_i) - floor_i, 0)
// with cap_i = max_{j in Q} S_ij (or +inf) and floor_i = max_{j in P} S_ij
// (or 0). Each h_i is nondecreasing, so h_i(max_j s_j) = max_j h_i(s_j) and
// every member is a facility location over transformed weights. The memo is
// the vector of current maxima cur_i.
//

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "function_impls.hpp"

namespace smi::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MaxMemo final : SelectionState::Memo {
  std::vector<double> cur;
  explicit MaxMemo(std::size_t n) : cur(n, 0.0) {}
  std::unique_ptr<Memo> clone() const override {
    return std::make_unique<MaxMemo>(*this);
  }
};

class FacilityLocationFamily final : public InfoFunction {
 public:
  FacilityLocationFamily(FunctionKind kind, const KernelBlocks& b)
      : InfoFunction(kind, b.ground->rows()), blocks_(b) {
    const std::size_t n = ground_size();
    cap_.assign(n, kInf);
    floor_.assign(n, 0.0);
    if (kind == FunctionKind::kFLVMI || kind == FunctionKind::kFLCMI) {
      cap_ = row_max(*b.ground_query);
    }
    if (kind == FunctionKind::kFLCG || kind == FunctionKind::kFLCMI) {
      floor_ = row_max(*b.ground_cond);
    }
  }

  double evaluate(std::span<const Index> subset) const override {
    check_subset(subset);
    const SimilarityKernel& s = *blocks_.ground;
    const FunctionKind k = kind();
    double total = 0.0;
    for (std::size_t i = 0; i < ground_size(); ++i) {
      double a = 0.0;
      for (Index j : subset) a = std::max(a, s(i, j));
      switch (k) {
        case FunctionKind::kFL:
          total += a;
          break;
        case FunctionKind::kFLVMI: {
          double q = 0.0;
          for (double v : blocks_.ground_query->row(i)) q = std::max(q, v);
          total += std::min(a, q);
          break;
        }
        case FunctionKind::kFLCG: {
          double p = 0.0;
          for (double v : blocks_.ground_cond->row(i)) p = std::max(p, v);
          total += std::max(a - p, 0.0);
          break;
        }
        case FunctionKind::kFLCMI: {
          double q = 0.0;
          for (double v : blocks_.ground_query->row(i)) q = std::max(q, v);
          double p = 0.0;
          for (double v : blocks_.ground_cond->row(i)) p = std::max(p, v);
          total += std::max(std::min(a, q) - p, 0.0);
          break;
        }
        default:
          break;
      }
    }
    return total;
  }

  // Also used by DIV_GCMI for its diversity term.
  double gain_from(const std::vector<double>& cur, Index x) const {
    // Symmetric kernel: row x holds S_ix for all i.
    const auto col = blocks_.ground->row(x);
    double g = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double s = col[i];
      if (s <= cur[i]) continue;
      g += h(i, s) - h(i, cur[i]);
    }
    return g;
  }

  void update(std::vector<double>& cur, Index x) const {
    const auto col = blocks_.ground->row(x);
    for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = std::max(cur[i], col[i]);
  }

 protected:
  std::unique_ptr<SelectionState::Memo> initial_memo() const override {
    return std::make_unique<MaxMemo>(ground_size());
  }

  double memo_gain(SelectionState::Memo& memo, std::span<const Index>,
                   Index x) const override {
    return gain_from(static_cast<MaxMemo&>(memo).cur, x);
  }

  CommitOutcome memo_commit(SelectionState::Memo& memo, std::span<const Index>,
                            Index x) const override {
    auto& cur = static_cast<MaxMemo&>(memo).cur;
    const double g = gain_from(cur, x);
    update(cur, x);
    return {g, 0};
  }

 private:
  double h(std::size_t i, double s) const {
    return std::max(std::min(s, cap_[i]) - floor_[i], 0.0);
  }

  KernelBlocks blocks_;
  std::vector<double> cap_;
  std::vector<double> floor_;
};

// FLQMI: sum_{i in Q} max_{j in A} S_ij + sum_{i in A} max_{j in Q} S_ij,
// read entirely from the U x Q block. Memo: current maxima per query point.
class QueryFacilityLocation final : public InfoFunction {
 public:
  explicit QueryFacilityLocation(const KernelBlocks& b)
      : InfoFunction(FunctionKind::kFLQMI, b.ground_query->rows()),
        cross_(b.ground_query),
        best_query_(row_max(*b.ground_query)) {}

  double evaluate(std::span<const Index> subset) const override {
    check_subset(subset);
    const SimilarityKernel& k = *cross_;
    double total = 0.0;
    for (std::size_t qi = 0; qi < k.cols(); ++qi) {
      double m = 0.0;
      for (Index j : subset) m = std::max(m, k(j, qi));
      total += m;
    }
    for (Index i : subset) {
      double m = 0.0;
      for (double v : k.row(i)) m = std::max(m, v);
      total += m;
    }
    return total;
  }

 protected:
  std::unique_ptr<SelectionState::Memo> initial_memo() const override {
    return std::make_unique<MaxMemo>(cross_->cols());
  }

  double memo_gain(SelectionState::Memo& memo, std::span<const Index>,
                   Index x) const override {
    const auto& cur = static_cast<MaxMemo&>(memo).cur;
    const auto row = cross_->row(x);
    double g = best_query_[x];
    for (std::size_t qi = 0; qi < cur.size(); ++qi) {
      if (row[qi] > cur[qi]) g += row[qi] - cur[qi];
    }
    return g;
  }

  CommitOutcome memo_commit(SelectionState::Memo& memo,
                            std::span<const Index> chosen,
                            Index x) const override {
    const double g = memo_gain(memo, chosen, x);
    auto& cur = static_cast<MaxMemo&>(memo).cur;
    const auto row = cross_->row(x);
    for (std::size_t qi = 0; qi < cur.size(); ++qi) cur[qi] = std::max(cur[qi], row[qi]);
    return {g, 0};
  }

 private:
  std::shared_ptr<const SimilarityKernel> cross_;
  std::vector<double> best_query_;
};

// DIV_GCMI = GCMI(A; Q) + eta * FL(A). A reconstruction of a "relevance plus
// diversity" baseline; reported as heuristic.
class DivGcmi final : public InfoFunction {
 public:
  DivGcmi(const KernelBlocks& b, double lambda, double eta)
      : InfoFunction(FunctionKind::kDivGCMI, b.ground->rows()),
        diversity_(FunctionKind::kFL, b),
        relevance_(ground_size(), 0.0),
        eta_(eta) {
    for (std::size_t i = 0; i < ground_size(); ++i) {
      double s = 0.0;
      for (double v : b.ground_query->row(i)) s += v;
      relevance_[i] = 2.0 * lambda * s;
    }
  }

  double evaluate(std::span<const Index> subset) const override {
    check_subset(subset);
    double r = 0.0;
    for (Index i : subset) r += relevance_[i];
    return r + eta_ * diversity_.evaluate(subset);
  }

 protected:
  std::unique_ptr<SelectionState::Memo> initial_memo() const override {
    return std::make_unique<MaxMemo>(ground_size());
  }

  double memo_gain(SelectionState::Memo& memo, std::span<const Index>,
                   Index x) const override {
    return relevance_[x] + eta_ * diversity_.gain_from(static_cast<MaxMemo&>(memo).cur, x);
  }

  CommitOutcome memo_commit(SelectionState::Memo& memo,
                            std::span<const Index> chosen,
                            Index x) const override {
    const double g = memo_gain(memo, chosen, x);
    diversity_.update(static_cast<MaxMemo&>(memo).cur, x);
    return {g, 0};
  }

 private:
  FacilityLocationFamily diversity_;
  std::vector<double> relevance_;
  double eta_;
};

}  // namespace

std::shared_ptr<const InfoFunction> make_facility_location(FunctionKind kind,
                                                           const KernelBlocks& b) {
  return std::make_shared<const FacilityLocationFamily>(kind, b);
}

std::shared_ptr<const InfoFunction> make_query_facility_location(const KernelBlocks& b) {
  return std::make_shared<const QueryFacilityLocation>(b);
}

std::shared_ptr<const InfoFunction> make_div_gcmi(const KernelBlocks& b,
                                                  double lambda, double eta) {
  return std::make_shared<const DivGcmi>(b, lambda, eta);
}

}  // namespace smi::detail
