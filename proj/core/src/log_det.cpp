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
// Log-determinant family.
//
// With g(A | C) = log det(S_A - S_AC S_C^{-1} S_CA) (and g(A | {}) = log det S_A):
//
//   LOGDET(A)    = g(A)
//   LOGDETMI(A)  = g(A) - g(A | Q)
//   LOGDETCG(A)  = g(A | P)
//   LOGDETCMI(A) = g(A | P) - g(A | P u Q)
//
// The last line follows from I(A; Q | P) = I(A u P; Q) - I(P; Q) and the Schur
// complement identity. Each g(. | C) is tracked by one incremental Cholesky
// "chain" over the conditional kernel K_C(a, i) = S_ai - u_a . u_i, where
// u_i = L_C^{-1} S_{C,i}. Candidates are brought up to date lazily: a
// candidate's row of the factor is extended only when its gain is requested.
//
// evaluate() does not use any of this; it computes the closed forms with
// dense factorizations.
//

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>

#include "function_impls.hpp"
#include "smi/errors.hpp"

namespace smi {

namespace {

constexpr double kMinPivot = 1e-12;

using Eigen::MatrixXd;

MatrixXd gather(const SimilarityKernel& k, std::span<const Index> rows,
                std::span<const Index> cols) {
  MatrixXd m(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = k(rows[r], cols[c]);
  }
  return m;
}

MatrixXd dense(const SimilarityKernel& k) {
  MatrixXd m(k.rows(), k.cols());
  for (std::size_t r = 0; r < k.rows(); ++r) {
    for (std::size_t c = 0; c < k.cols(); ++c) m(r, c) = k(r, c);
  }
  return m;
}

std::string condition_report(const MatrixXd& s, std::string_view name) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  std::ostringstream msg;
  msg << name << " (" << s.rows() << "x" << s.cols()
      << ") is singular after regularization: smallest eigenvalue "
      << ev.minCoeff() << ", largest " << ev.maxCoeff();
  if (ev.minCoeff() > 0) msg << ", condition number " << ev.maxCoeff() / ev.minCoeff();
  return msg.str();
}

// Lower Cholesky factor; throws NumericalError on a pivot below kMinPivot.
MatrixXd cholesky_or_throw(const MatrixXd& s, std::string_view name) {
  if (s.rows() == 0) return MatrixXd(0, 0);
  Eigen::LLT<MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(condition_report(s, name));
  }
  MatrixXd l = llt.matrixL();
  if ((l.diagonal().array().square() < kMinPivot).any()) {
    throw NumericalError(condition_report(s, name));
  }
  return l;
}

// log det of a symmetric PSD matrix; -inf when singular.
double log_det_psd(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  double total = 0.0;
  for (double v : eig.eigenvalues()) {
    if (v <= 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log(v);
  }
  return total;
}

// log det of a general square matrix with positive determinant.
double log_det_general(const MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::PartialPivLU<MatrixXd> lu(m);
  const double det = lu.determinant();
  if (!(det > 0.0)) {
    return det == 0.0 ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::quiet_NaN();
  }
  return lu.matrixLU().diagonal().array().abs().log().sum();
}

// x^T S^{-1} y for an SPD S, via its Cholesky factor.
MatrixXd quadratic(const MatrixXd& x, const MatrixXd& l, const MatrixXd& y) {
  if (l.rows() == 0) return MatrixXd::Zero(x.rows(), y.rows());
  MatrixXd lx = l.triangularView<Eigen::Lower>().solve(x.transpose());
  MatrixXd ly = l.triangularView<Eigen::Lower>().solve(y.transpose());
  return lx.transpose() * ly;
}

}  // namespace

namespace detail {
enum class Conditioning { kNone = -1, kQuery = 0, kCond = 1, kCondQuery = 2 };
}  // namespace detail
using detail::Conditioning;

class ConditioningCache {
 public:
  // Lower Cholesky factor of S_C. Computed once per cache; all callers must
  // pass blocks with the same query/cond contents.
  std::shared_ptr<const MatrixXd> factor(Conditioning which, const KernelBlocks& b) {
    const auto slot = static_cast<std::size_t>(which);
    std::lock_guard<std::mutex> lock(mu_);
    if (!factors_[slot]) {
      factors_[slot] = std::make_shared<const MatrixXd>(compute(which, b));
    }
    return factors_[slot];
  }

  static MatrixXd assemble(Conditioning which, const KernelBlocks& b) {
    switch (which) {
      case Conditioning::kQuery:
        return dense(*b.query);
      case Conditioning::kCond:
        return dense(*b.cond);
      case Conditioning::kCondQuery: {
        const std::size_t p = b.cond->rows();
        const std::size_t q = b.query->rows();
        MatrixXd s(p + q, p + q);
        s.topLeftCorner(p, p) = dense(*b.cond);
        s.bottomRightCorner(q, q) = dense(*b.query);
        const MatrixXd qp = dense(*b.query_cond);
        s.topRightCorner(p, q) = qp.transpose();
        s.bottomLeftCorner(q, p) = qp;
        return s;
      }
      case Conditioning::kNone:
        break;
    }
    return MatrixXd(0, 0);
  }

 private:
  static MatrixXd compute(Conditioning which, const KernelBlocks& b) {
    static constexpr std::array<std::string_view, 3> names = {"S_Q", "S_P", "S_{P u Q}"};
    return cholesky_or_throw(assemble(which, b), names[static_cast<std::size_t>(which)]);
  }

  std::mutex mu_;
  std::array<std::shared_ptr<const MatrixXd>, 3> factors_;
};

std::shared_ptr<ConditioningCache> make_conditioning_cache() {
  return std::make_shared<ConditioningCache>();
}

namespace detail {
namespace {

std::shared_ptr<const MatrixXd> factor_for(Conditioning which, const KernelBlocks& b,
                                           const std::shared_ptr<ConditioningCache>& cache) {
  if (cache) return cache->factor(which, b);
  ConditioningCache local;
  return local.factor(which, b);
}

// Conditional kernel K_C over the ground set.
class ConditionalKernel {
 public:
  ConditionalKernel(std::shared_ptr<const SimilarityKernel> ground,
                    Conditioning which, const KernelBlocks& b,
                    const std::shared_ptr<ConditioningCache>& cache)
      : ground_(std::move(ground)) {
    const std::size_t n = ground_->rows();
    if (which != Conditioning::kNone) {
      const std::shared_ptr<const MatrixXd> l = factor_for(which, b, cache);
      // Columns of `proj_` are S_{C,i}, then L^{-1} S_{C,i}.
      const std::size_t p = (which == Conditioning::kQuery) ? 0 : b.cond->rows();
      const std::size_t q = (which == Conditioning::kCond) ? 0 : b.query->rows();
      proj_.resize(static_cast<Eigen::Index>(p + q), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < p; ++c) proj_(c, i) = (*b.ground_cond)(i, c);
        for (std::size_t c = 0; c < q; ++c) proj_(p + c, i) = (*b.ground_query)(i, c);
      }
      if (proj_.rows() > 0) l->triangularView<Eigen::Lower>().solveInPlace(proj_);
    }
    diag_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      diag_[i] = (*ground_)(i, i) - (proj_.rows() > 0 ? proj_.col(i).squaredNorm() : 0.0);
    }
  }

  double operator()(Index a, Index i) const {
    double v = (*ground_)(a, i);
    if (proj_.rows() > 0) v -= proj_.col(a).dot(proj_.col(i));
    return v;
  }
  double diag(Index i) const { return diag_[i]; }

 private:
  std::shared_ptr<const SimilarityKernel> ground_;
  MatrixXd proj_;
  std::vector<double> diag_;
};

// Incremental Cholesky rows of K_C restricted to the selection.
struct Chain {
  std::vector<std::vector<double>> rows;  // per candidate, one entry per caught-up step
  std::vector<double> residual;           // Schur residual d^2 per candidate
  std::vector<double> pivots;             // d of each committed step

  void catch_up(const ConditionalKernel& k, std::span<const Index> chosen, Index x) {
    auto& rx = rows[x];
    for (std::size_t step = rx.size(); step < chosen.size(); ++step) {
      const Index a = chosen[step];
      const auto& ra = rows[a];  // exactly `step` entries, frozen at commit
      double e = k(a, x);
      for (std::size_t t = 0; t < step; ++t) e -= ra[t] * rx[t];
      e /= pivots[step];
      rx.push_back(e);
      residual[x] -= e * e;
    }
  }
};

struct ChainMemo final : SelectionState::Memo {
  std::vector<Chain> chains;
  std::unique_ptr<Memo> clone() const override {
    return std::make_unique<ChainMemo>(*this);
  }
};

double safe_log(double d2) { return std::log(std::max(d2, kMinPivot)); }

class LogDetFamily final : public InfoFunction {
 public:
  LogDetFamily(FunctionKind kind, const KernelBlocks& b,
               const std::shared_ptr<ConditioningCache>& cache)
      : InfoFunction(kind, b.ground->rows()), blocks_(b) {
    switch (kind) {
      case FunctionKind::kLogDet:
        add_chain(Conditioning::kNone, +1.0, cache);
        break;
      case FunctionKind::kLogDetMI:
        add_chain(Conditioning::kNone, +1.0, cache);
        add_chain(Conditioning::kQuery, -1.0, cache);
        break;
      case FunctionKind::kLogDetCG:
        add_chain(Conditioning::kCond, +1.0, cache);
        break;
      case FunctionKind::kLogDetCMI:
        add_chain(Conditioning::kCond, +1.0, cache);
        add_chain(Conditioning::kCondQuery, -1.0, cache);
        break;
      default:
        break;
    }
    // Closed-form evaluate() needs S_Q^{-1} and S_P^{-1}.
    if (kind == FunctionKind::kLogDetMI || kind == FunctionKind::kLogDetCMI) {
      query_factor_ = factor_for(Conditioning::kQuery, b, cache);
    }
    if (kind == FunctionKind::kLogDetCG || kind == FunctionKind::kLogDetCMI) {
      cond_factor_ = factor_for(Conditioning::kCond, b, cache);
    }
  }

  double evaluate(std::span<const Index> subset) const override {
    check_subset(subset);
    const MatrixXd s_a = gather(*blocks_.ground, subset, subset);
    switch (kind()) {
      case FunctionKind::kLogDet:
        return log_det_psd(s_a);
      case FunctionKind::kLogDetMI: {
        const MatrixXd s_aq = gather_all_cols(*blocks_.ground_query, subset);
        return log_det_psd(s_a) - log_det_psd(s_a - quadratic(s_aq, *query_factor_, s_aq));
      }
      case FunctionKind::kLogDetCG: {
        const MatrixXd s_ap = gather_all_cols(*blocks_.ground_cond, subset);
        return log_det_psd(s_a - quadratic(s_ap, *cond_factor_, s_ap));
      }
      case FunctionKind::kLogDetCMI:
        return evaluate_cmi(subset);
      default:
        break;
    }
    return 0.0;
  }

 protected:
  std::unique_ptr<SelectionState::Memo> initial_memo() const override {
    auto memo = std::make_unique<ChainMemo>();
    for (const auto& k : kernels_) {
      Chain c;
      c.rows.resize(ground_size());
      c.residual.resize(ground_size());
      for (std::size_t i = 0; i < ground_size(); ++i) c.residual[i] = k.diag(i);
      memo->chains.push_back(std::move(c));
    }
    return memo;
  }

  double memo_gain(SelectionState::Memo& memo, std::span<const Index> chosen,
                   Index x) const override {
    auto& chains = static_cast<ChainMemo&>(memo).chains;
    double g = 0.0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
      chains[c].catch_up(kernels_[c], chosen, x);
      g += signs_[c] * safe_log(chains[c].residual[x]);
    }
    return g;
  }

  CommitOutcome memo_commit(SelectionState::Memo& memo,
                            std::span<const Index> chosen,
                            Index x) const override {
    CommitOutcome out;
    out.gain = memo_gain(memo, chosen, x);
    for (auto& chain : static_cast<ChainMemo&>(memo).chains) {
      double d2 = chain.residual[x];
      if (d2 < kMinPivot) {
        d2 = kMinPivot;
        ++out.clamped;
      }
      chain.pivots.push_back(std::sqrt(d2));
    }
    return out;
  }

 private:
  void add_chain(Conditioning which, double sign,
                 const std::shared_ptr<ConditioningCache>& cache) {
    kernels_.emplace_back(blocks_.ground, which, blocks_, cache);
    signs_.push_back(sign);
  }

  static MatrixXd gather_all_cols(const SimilarityKernel& k, std::span<const Index> rows) {
    MatrixXd m(rows.size(), k.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < k.cols(); ++c) m(r, c) = k(rows[r], c);
    }
    return m;
  }

  // log det(I - S_P^{-1} S_PQ S_Q^{-1} S_QP)
  //   - log det(I - S_{AuP}^{-1} S_{AuP,Q} S_Q^{-1} S_{Q,AuP})
  double evaluate_cmi(std::span<const Index> subset) const {
    const std::size_t a = subset.size();
    const std::size_t p = blocks_.cond->rows();
    const std::size_t q = blocks_.query->rows();
    const MatrixXd s_p = dense(*blocks_.cond);
    const MatrixXd s_pq = dense(*blocks_.query_cond).transpose();

    MatrixXd s_ap(a + p, a + p);
    MatrixXd s_ap_q(a + p, q);
    s_ap.topLeftCorner(a, a) = gather(*blocks_.ground, subset, subset);
    const MatrixXd cross = gather_all_cols(*blocks_.ground_cond, subset);
    s_ap.topRightCorner(a, p) = cross;
    s_ap.bottomLeftCorner(p, a) = cross.transpose();
    s_ap.bottomRightCorner(p, p) = s_p;
    s_ap_q.topRows(a) = gather_all_cols(*blocks_.ground_query, subset);
    s_ap_q.bottomRows(p) = s_pq;

    auto term = [&](const MatrixXd& s_x, const MatrixXd& s_xq) {
      if (s_x.rows() == 0) return 0.0;
      const MatrixXd inner = quadratic(s_xq, *query_factor_, s_xq);  // S_XQ S_Q^{-1} S_QX
      const MatrixXd m = MatrixXd::Identity(s_x.rows(), s_x.cols()) -
                         s_x.partialPivLu().solve(inner);
      return log_det_general(m);
    };
    return term(s_p, s_pq) - term(s_ap, s_ap_q);
  }

  KernelBlocks blocks_;
  std::vector<ConditionalKernel> kernels_;
  std::vector<double> signs_;
  std::shared_ptr<const MatrixXd> query_factor_;
  std::shared_ptr<const MatrixXd> cond_factor_;
};

}  // namespace

std::shared_ptr<const InfoFunction> make_log_det(FunctionKind kind,
                                                 const KernelBlocks& b,
                                                 const std::shared_ptr<ConditioningCache>& cache) {
  return std::make_shared<const LogDetFamily>(kind, b, cache);
}

}  // namespace detail
}  // namespace smi
