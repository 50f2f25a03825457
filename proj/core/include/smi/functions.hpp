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
// Submodular information functions as incremental set-function oracles.
//
// A function is defined over a ground set U (the unlabeled pool, indexed
// 0..n-1), an optional query set Q and an optional conditioning set P. Q and P
// are never part of the ground set; they enter only through kernel blocks:
//
//   ground        U x U   (square, symmetric)
//   ground_query  U x Q
//   ground_cond   U x P
//   query         Q x Q   (square, symmetric)
//   cond          P x P   (square, symmetric)
//   query_cond    Q x P
//
// evaluate() computes the closed form of each instantiation from scratch.
// gain()/commit() run on a SelectionState that memoizes whatever the family
// needs (per-point maxima for facility location, cross sums for graph cut,
// incremental Cholesky rows for log-determinant), so that the committed gains
// always add up to evaluate() of the chosen set.
//

#ifndef SMI_FUNCTIONS_HPP_
#define SMI_FUNCTIONS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smi/similarity.hpp"

namespace smi {

enum class FunctionKind {
  kFL,
  kGC,
  kLogDet,
  kFLVMI,
  kFLQMI,
  kGCMI,
  kLogDetMI,
  kFLCG,
  kGCCG,
  kLogDetCG,
  kFLCMI,
  kLogDetCMI,
  kDivGCMI,
};

enum class FunctionFamily {
  kSubmodular,          // f(A)
  kMutualInformation,   // I(A; Q)
  kConditionalGain,     // f(A | P)
  kConditionalMutualInformation,  // I(A; Q | P)
};

// Canonical upper-case names ("FLVMI", "LOGDETCMI", "DIV_GCMI", ...).
std::string_view to_string(FunctionKind kind);
// Case-insensitive inverse of to_string().
std::optional<FunctionKind> parse_function_kind(std::string_view name);
std::span<const FunctionKind> all_function_kinds();

FunctionFamily family_of(FunctionKind kind);
bool is_log_det(FunctionKind kind);
// Monotone nondecreasing in A for every nonnegative kernel.
bool is_monotone(FunctionKind kind);
// Submodular in A for every admissible kernel. LOGDETMI and LOGDETCMI are
// not: the Gaussian mutual information can have increasing returns.
bool is_submodular(FunctionKind kind);

enum BlockMask : unsigned {
  kGroundBlock = 1u << 0,
  kGroundQueryBlock = 1u << 1,
  kGroundCondBlock = 1u << 2,
  kQueryBlock = 1u << 3,
  kCondBlock = 1u << 4,
  kQueryCondBlock = 1u << 5,
};

// Bitwise OR of the BlockMask values a kind reads.
unsigned required_blocks(FunctionKind kind);

struct KernelBlocks {
  std::shared_ptr<const SimilarityKernel> ground;
  std::shared_ptr<const SimilarityKernel> ground_query;
  std::shared_ptr<const SimilarityKernel> ground_cond;
  std::shared_ptr<const SimilarityKernel> query;
  std::shared_ptr<const SimilarityKernel> cond;
  std::shared_ptr<const SimilarityKernel> query_cond;

  unsigned present() const;

  // Cuts all six blocks out of one joint kernel. `u`, `q` and `p` index the
  // joint kernel; they are normally disjoint but need not be.
  static KernelBlocks from_joint(const SimilarityKernel& joint,
                                 std::span<const Index> u,
                                 std::span<const Index> q,
                                 std::span<const Index> p);
};

// Cholesky factors of S_Q, S_P and S_{P u Q}, computed at most once and
// shared between every log-determinant function built over the same query
// and conditioning blocks (e.g. all chunks of a partitioned selection).
class ConditioningCache;

struct FunctionParams {
  double gc_lambda = 1.0;
  // Weight of the facility-location diversity term in DIV_GCMI.
  double eta = 1.0;
  std::shared_ptr<ConditioningCache> cache;
};

std::shared_ptr<ConditioningCache> make_conditioning_cache();

class InfoFunction;

// Growing selection A plus the memo of the function that created it.
class SelectionState {
 public:
  struct Memo {
    virtual ~Memo() = default;
    virtual std::unique_ptr<Memo> clone() const = 0;
  };

  SelectionState(const SelectionState& other);
  SelectionState& operator=(const SelectionState& other);
  SelectionState(SelectionState&&) noexcept = default;
  SelectionState& operator=(SelectionState&&) noexcept = default;
  ~SelectionState() = default;

  const std::vector<Index>& chosen() const { return chosen_; }
  bool contains(Index x) const { return x < in_set_.size() && in_set_[x] != 0; }
  // Sum of the gains realized by commit().
  double value() const { return value_; }
  // Cholesky pivots clamped at 1e-12 during commits.
  std::size_t numerical_warnings() const { return numerical_warnings_; }

 private:
  friend class InfoFunction;
  SelectionState(std::size_t ground_size, std::unique_ptr<Memo> memo);

  std::vector<Index> chosen_;
  std::vector<char> in_set_;
  double value_ = 0.0;
  std::size_t numerical_warnings_ = 0;
  std::unique_ptr<Memo> memo_;
};

class InfoFunction {
 public:
  virtual ~InfoFunction() = default;

  FunctionKind kind() const { return kind_; }
  std::size_t ground_size() const { return ground_size_; }
  // DIV_GCMI is a reconstruction, not a closed form from the literature.
  bool heuristic() const { return kind_ == FunctionKind::kDivGCMI; }

  // Closed-form value of the subset, computed from scratch. Throws
  // std::invalid_argument for out-of-range or repeated indices.
  virtual double evaluate(std::span<const Index> subset) const = 0;

  SelectionState make_state() const;
  // Marginal gain of x with respect to state.chosen(). May advance memoized
  // data for x, hence the non-const state.
  double gain(SelectionState& state, Index x) const;
  // Adds x to the selection and returns the gain it realized.
  double commit(SelectionState& state, Index x) const;

 protected:
  InfoFunction(FunctionKind kind, std::size_t ground_size)
      : kind_(kind), ground_size_(ground_size) {}

  virtual std::unique_ptr<SelectionState::Memo> initial_memo() const = 0;
  virtual double memo_gain(SelectionState::Memo& memo,
                           std::span<const Index> chosen, Index x) const = 0;
  // Updates the memo for x joining the selection; returns the realized gain
  // and the number of pivots that had to be clamped.
  struct CommitOutcome {
    double gain = 0.0;
    std::size_t clamped = 0;
  };
  virtual CommitOutcome memo_commit(SelectionState::Memo& memo,
                                    std::span<const Index> chosen,
                                    Index x) const = 0;

  void check_subset(std::span<const Index> subset) const;

 private:
  FunctionKind kind_;
  std::size_t ground_size_;
};

std::shared_ptr<const InfoFunction> make_function(FunctionKind kind,
                                                  const KernelBlocks& blocks,
                                                  const FunctionParams& params = {});

// Which instantiation an SCMI kind reduces to once Q and P are substituted:
//   Q <- U, P <- {}  : the plain submodular function
//   Q <- Q, P <- {}  : the mutual-information instantiation
//   Q <- U, P <- P   : the conditional-gain instantiation
//   otherwise        : the SCMI itself.
FunctionKind reduced_kind(FunctionKind scmi_kind, bool query_is_ground,
                          bool cond_empty);

// Builds reduced_kind(...) over `blocks`. kind must be FLCMI or LOGDETCMI.
std::shared_ptr<const InfoFunction> reduce_scmi(FunctionKind scmi_kind,
                                                bool query_is_ground,
                                                bool cond_empty,
                                                const KernelBlocks& blocks,
                                                const FunctionParams& params = {});

}  // namespace smi

#endif  // SMI_FUNCTIONS_HPP_
