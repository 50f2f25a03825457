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

#include "smi/functions.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <string>

#include "function_impls.hpp"

namespace smi {
namespace {

struct KindInfo {
  FunctionKind kind;
  std::string_view name;
  FunctionFamily family;
  unsigned blocks;
};

constexpr unsigned kAllBlocks = kGroundBlock | kGroundQueryBlock | kGroundCondBlock |
                                kQueryBlock | kCondBlock | kQueryCondBlock;

constexpr std::array<KindInfo, 13> kKinds = {{
    {FunctionKind::kFL, "FL", FunctionFamily::kSubmodular, kGroundBlock},
    {FunctionKind::kGC, "GC", FunctionFamily::kSubmodular, kGroundBlock},
    {FunctionKind::kLogDet, "LOGDET", FunctionFamily::kSubmodular, kGroundBlock},
    {FunctionKind::kFLVMI, "FLVMI", FunctionFamily::kMutualInformation,
     kGroundBlock | kGroundQueryBlock},
    {FunctionKind::kFLQMI, "FLQMI", FunctionFamily::kMutualInformation,
     kGroundQueryBlock},
    {FunctionKind::kGCMI, "GCMI", FunctionFamily::kMutualInformation,
     kGroundQueryBlock},
    {FunctionKind::kLogDetMI, "LOGDETMI", FunctionFamily::kMutualInformation,
     kGroundBlock | kGroundQueryBlock | kQueryBlock},
    {FunctionKind::kFLCG, "FLCG", FunctionFamily::kConditionalGain,
     kGroundBlock | kGroundCondBlock},
    {FunctionKind::kGCCG, "GCCG", FunctionFamily::kConditionalGain,
     kGroundBlock | kGroundCondBlock},
    {FunctionKind::kLogDetCG, "LOGDETCG", FunctionFamily::kConditionalGain,
     kGroundBlock | kGroundCondBlock | kCondBlock},
    {FunctionKind::kFLCMI, "FLCMI", FunctionFamily::kConditionalMutualInformation,
     kGroundBlock | kGroundQueryBlock | kGroundCondBlock},
    {FunctionKind::kLogDetCMI, "LOGDETCMI",
     FunctionFamily::kConditionalMutualInformation, kAllBlocks},
    {FunctionKind::kDivGCMI, "DIV_GCMI", FunctionFamily::kMutualInformation,
     kGroundBlock | kGroundQueryBlock},
}};

constexpr std::array<FunctionKind, 13> kKindList = {
    FunctionKind::kFL,       FunctionKind::kGC,        FunctionKind::kLogDet,
    FunctionKind::kFLVMI,    FunctionKind::kFLQMI,     FunctionKind::kGCMI,
    FunctionKind::kLogDetMI, FunctionKind::kFLCG,      FunctionKind::kGCCG,
    FunctionKind::kLogDetCG, FunctionKind::kFLCMI,     FunctionKind::kLogDetCMI,
    FunctionKind::kDivGCMI};

const KindInfo& info(FunctionKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw std::invalid_argument("unknown function kind");
}

void check_block(const std::shared_ptr<const SimilarityKernel>& k,
                 std::string_view name, std::size_t rows, std::size_t cols,
                 bool square) {
  if (k->rows() != rows || k->cols() != cols) {
    throw std::invalid_argument(std::string(name) + " block has shape " +
                                std::to_string(k->rows()) + "x" +
                                std::to_string(k->cols()) + ", expected " +
                                std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (square && !k->symmetric()) {
    throw std::invalid_argument(std::string(name) + " block must be symmetric");
  }
}

}  // namespace

std::string_view to_string(FunctionKind kind) { return info(kind).name; }

std::optional<FunctionKind> parse_function_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  std::replace(upper.begin(), upper.end(), '-', '_');
  for (const auto& k : kKinds) {
    if (k.name == upper) return k.kind;
  }
  return std::nullopt;
}

std::span<const FunctionKind> all_function_kinds() { return kKindList; }

FunctionFamily family_of(FunctionKind kind) { return info(kind).family; }

bool is_log_det(FunctionKind kind) {
  return kind == FunctionKind::kLogDet || kind == FunctionKind::kLogDetMI ||
         kind == FunctionKind::kLogDetCG || kind == FunctionKind::kLogDetCMI;
}

bool is_monotone(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::kFL:
    case FunctionKind::kFLVMI:
    case FunctionKind::kFLQMI:
    case FunctionKind::kGCMI:
    case FunctionKind::kFLCG:
    case FunctionKind::kFLCMI:
    case FunctionKind::kDivGCMI:
      return true;
    default:
      return false;
  }
}

bool is_submodular(FunctionKind kind) {
  return kind != FunctionKind::kLogDetMI && kind != FunctionKind::kLogDetCMI;
}

unsigned required_blocks(FunctionKind kind) { return info(kind).blocks; }

unsigned KernelBlocks::present() const {
  unsigned mask = 0;
  if (ground) mask |= kGroundBlock;
  if (ground_query) mask |= kGroundQueryBlock;
  if (ground_cond) mask |= kGroundCondBlock;
  if (query) mask |= kQueryBlock;
  if (cond) mask |= kCondBlock;
  if (query_cond) mask |= kQueryCondBlock;
  return mask;
}

KernelBlocks KernelBlocks::from_joint(const SimilarityKernel& joint,
                                      std::span<const Index> u,
                                      std::span<const Index> q,
                                      std::span<const Index> p) {
  auto block = [&](std::span<const Index> r, std::span<const Index> c) {
    return std::make_shared<const SimilarityKernel>(submatrix(joint, r, c));
  };
  KernelBlocks b;
  b.ground = block(u, u);
  b.ground_query = block(u, q);
  b.ground_cond = block(u, p);
  b.query = block(q, q);
  b.cond = block(p, p);
  b.query_cond = block(q, p);
  return b;
}

SelectionState::SelectionState(std::size_t ground_size, std::unique_ptr<Memo> memo)
    : in_set_(ground_size, 0), memo_(std::move(memo)) {}

SelectionState::SelectionState(const SelectionState& other)
    : chosen_(other.chosen_),
      in_set_(other.in_set_),
      value_(other.value_),
      numerical_warnings_(other.numerical_warnings_),
      memo_(other.memo_ ? other.memo_->clone() : nullptr) {}

SelectionState& SelectionState::operator=(const SelectionState& other) {
  if (this != &other) {
    SelectionState copy(other);
    *this = std::move(copy);
  }
  return *this;
}

SelectionState InfoFunction::make_state() const {
  return SelectionState(ground_size_, initial_memo());
}

double InfoFunction::gain(SelectionState& state, Index x) const {
  if (x >= ground_size_) throw std::invalid_argument("gain: index out of range");
  if (state.contains(x)) throw std::invalid_argument("gain: element already chosen");
  return memo_gain(*state.memo_, state.chosen_, x);
}

double InfoFunction::commit(SelectionState& state, Index x) const {
  if (x >= ground_size_) throw std::invalid_argument("commit: index out of range");
  if (state.contains(x)) throw std::invalid_argument("commit: duplicate commit");
  const CommitOutcome out = memo_commit(*state.memo_, state.chosen_, x);
  state.chosen_.push_back(x);
  state.in_set_[x] = 1;
  state.value_ += out.gain;
  state.numerical_warnings_ += out.clamped;
  return out.gain;
}

void InfoFunction::check_subset(std::span<const Index> subset) const {
  std::vector<char> seen(ground_size_, 0);
  for (Index x : subset) {
    if (x >= ground_size_) throw std::invalid_argument("evaluate: index out of range");
    if (seen[x]) throw std::invalid_argument("evaluate: repeated index");
    seen[x] = 1;
  }
}

std::shared_ptr<const InfoFunction> make_function(FunctionKind kind,
                                                  const KernelBlocks& blocks,
                                                  const FunctionParams& params) {
  const unsigned need = required_blocks(kind);
  if ((blocks.present() & need) != need) {
    throw std::invalid_argument(std::string("make_function: ") +
                                std::string(to_string(kind)) +
                                " is missing a required kernel block");
  }
  const std::size_t n = (need & kGroundBlock) ? blocks.ground->rows()
                                              : blocks.ground_query->rows();
  const std::size_t q = (need & kGroundQueryBlock) ? blocks.ground_query->cols()
                        : (need & kQueryBlock)     ? blocks.query->rows()
                                                   : 0;
  const std::size_t p = (need & kGroundCondBlock) ? blocks.ground_cond->cols() : 0;
  if (need & kGroundBlock) check_block(blocks.ground, "ground", n, n, true);
  if (need & kGroundQueryBlock) check_block(blocks.ground_query, "ground_query", n, q, false);
  if (need & kGroundCondBlock) check_block(blocks.ground_cond, "ground_cond", n, p, false);
  if (need & kQueryBlock) check_block(blocks.query, "query", q, q, true);
  if (need & kCondBlock) check_block(blocks.cond, "cond", p, p, true);
  if (need & kQueryCondBlock) check_block(blocks.query_cond, "query_cond", q, p, false);

  switch (kind) {
    case FunctionKind::kFL:
    case FunctionKind::kFLVMI:
    case FunctionKind::kFLCG:
    case FunctionKind::kFLCMI:
      return detail::make_facility_location(kind, blocks);
    case FunctionKind::kFLQMI:
      return detail::make_query_facility_location(blocks);
    case FunctionKind::kGC:
    case FunctionKind::kGCMI:
    case FunctionKind::kGCCG:
      return detail::make_graph_cut(kind, blocks, params.gc_lambda);
    case FunctionKind::kDivGCMI:
      return detail::make_div_gcmi(blocks, params.gc_lambda, params.eta);
    case FunctionKind::kLogDet:
    case FunctionKind::kLogDetMI:
    case FunctionKind::kLogDetCG:
    case FunctionKind::kLogDetCMI:
      return detail::make_log_det(kind, blocks, params.cache);
  }
  throw std::invalid_argument("make_function: unknown kind");
}

FunctionKind reduced_kind(FunctionKind scmi_kind, bool query_is_ground,
                          bool cond_empty) {
  const bool fl = scmi_kind == FunctionKind::kFLCMI;
  if (!fl && scmi_kind != FunctionKind::kLogDetCMI) {
    throw std::invalid_argument("reduce_scmi: kind must be FLCMI or LOGDETCMI");
  }
  if (query_is_ground && cond_empty) return fl ? FunctionKind::kFL : FunctionKind::kLogDet;
  if (cond_empty) return fl ? FunctionKind::kFLVMI : FunctionKind::kLogDetMI;
  if (query_is_ground) return fl ? FunctionKind::kFLCG : FunctionKind::kLogDetCG;
  return scmi_kind;
}

std::shared_ptr<const InfoFunction> reduce_scmi(FunctionKind scmi_kind,
                                                bool query_is_ground,
                                                bool cond_empty,
                                                const KernelBlocks& blocks,
                                                const FunctionParams& params) {
  KernelBlocks b = blocks;
  if (query_is_ground) {
    b.ground_query = b.ground;
    b.query = b.ground;
  }
  return make_function(reduced_kind(scmi_kind, query_is_ground, cond_empty), b,
                       params);
}

namespace detail {

std::vector<double> row_max(const SimilarityKernel& k) {
  std::vector<double> out(k.rows(), 0.0);
  for (std::size_t i = 0; i < k.rows(); ++i) {
    double m = 0.0;
    for (double v : k.row(i)) m = std::max(m, v);
    out[i] = m;
  }
  return out;
}

}  // namespace detail
}  // namespace smi
