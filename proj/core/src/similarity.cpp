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

#include "smi/similarity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace smi {
namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<PointId> iota_ids(std::size_t n) {
  std::vector<PointId> ids(n);
  std::iota(ids.begin(), ids.end(), PointId{0});
  return ids;
}

// Unit-normalized copy of the embedding rows.
RowMajorMatrix normalized_rows(const EmbeddingMatrix& m) {
  RowMajorMatrix out(m.rows(), m.dim());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    double sq = 0.0;
    for (double v : r) sq += v * v;
    if (!(sq > 0.0)) {
      throw std::invalid_argument("cosine_kernel: zero-norm embedding row id " +
                                  std::to_string(m.ids()[i]));
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t k = 0; k < m.dim(); ++k) out(i, k) = r[k] * inv;
  }
  return out;
}

constexpr Eigen::Index kTile = 256;

void check_factor_pair(const EmbeddingMatrix& r, const EmbeddingMatrix& x) {
  if (r.rows() != x.rows()) {
    throw std::invalid_argument("outer_cosine_kernel: factor row count mismatch");
  }
}

void rescale(RowMajorMatrix& g) {
  g = (0.5 * (g.array() + 1.0)).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

// Fills a symmetric output from upper-triangle tiles. `tile(i0, ni, j0, nj)`
// returns raw cosines for that block; lower tiles are exact mirrors.
template <typename TileFn>
void fill_symmetric(Eigen::Map<RowMajorMatrix>& out, TileFn tile) {
  const Eigen::Index n = out.rows();
  for (Eigen::Index i0 = 0; i0 < n; i0 += kTile) {
    const Eigen::Index ni = std::min(kTile, n - i0);
    for (Eigen::Index j0 = i0; j0 < n; j0 += kTile) {
      const Eigen::Index nj = std::min(kTile, n - j0);
      RowMajorMatrix g = tile(i0, ni, j0, nj);
      rescale(g);
      if (i0 == j0) {
        for (Eigen::Index a = 0; a < ni; ++a) {
          out(i0 + a, i0 + a) = 1.0;
          for (Eigen::Index b = a + 1; b < nj; ++b) {
            out(i0 + a, j0 + b) = g(a, b);
            out(j0 + b, i0 + a) = g(a, b);
          }
        }
      } else {
        out.block(i0, j0, ni, nj) = g;
        out.block(j0, i0, nj, ni) = g.transpose();
      }
    }
  }
}

// Raw cosines (ra rb^T) .* (xa xb^T) in row blocks, all inputs unit rows.
void fill_outer_cross(const RowMajorMatrix& ra, const RowMajorMatrix& xa,
                      const RowMajorMatrix& rb, const RowMajorMatrix& xb,
                      Eigen::Map<RowMajorMatrix>& out) {
  const Eigen::Index n = ra.rows();
  for (Eigen::Index start = 0; start < n; start += kTile) {
    const Eigen::Index len = std::min(kTile, n - start);
    RowMajorMatrix gr = ra.middleRows(start, len) * rb.transpose();
    gr.array() *= (xa.middleRows(start, len) * xb.transpose()).array();
    rescale(gr);
    out.middleRows(start, len) = gr;
  }
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim,
                                 std::vector<double> data,
                                 std::vector<PointId> ids)
    : rows_(rows), dim_(dim), data_(std::move(data)), ids_(std::move(ids)) {
  if (data_.size() != rows_ * dim_) {
    throw std::invalid_argument("EmbeddingMatrix: data size != rows * dim");
  }
  if (ids_.size() != rows_) {
    throw std::invalid_argument("EmbeddingMatrix: ids size != rows");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw std::invalid_argument("EmbeddingMatrix: non-finite entry in row id " +
                                  std::to_string(ids_[i / std::max<std::size_t>(dim_, 1)]));
    }
  }
  std::unordered_set<PointId> seen(ids_.begin(), ids_.end());
  if (seen.size() != ids_.size()) {
    throw std::invalid_argument("EmbeddingMatrix: duplicate ids");
  }
}

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dim,
                                 std::vector<double> data)
    : EmbeddingMatrix(rows, dim, std::move(data), iota_ids(rows)) {}

EmbeddingMatrix EmbeddingMatrix::select(std::span<const Index> rows) const {
  std::vector<double> data;
  data.reserve(rows.size() * dim_);
  std::vector<PointId> ids;
  ids.reserve(rows.size());
  for (Index r : rows) {
    if (r >= rows_) throw std::invalid_argument("EmbeddingMatrix::select: row out of range");
    auto src = row(r);
    data.insert(data.end(), src.begin(), src.end());
    ids.push_back(ids_[r]);
  }
  return EmbeddingMatrix(rows.size(), dim_, std::move(data), std::move(ids));
}

SimilarityKernel::SimilarityKernel(std::size_t rows, std::size_t cols,
                                   std::vector<double> data, bool symmetric,
                                   std::vector<PointId> row_ids,
                                   std::vector<PointId> col_ids,
                                   double regularization)
    : rows_(rows),
      cols_(cols),
      data_(std::move(data)),
      symmetric_(symmetric),
      row_ids_(std::move(row_ids)),
      col_ids_(std::move(col_ids)),
      regularization_(regularization) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("SimilarityKernel: data size != rows * cols");
  }
  if (row_ids_.size() != rows_ || col_ids_.size() != cols_) {
    throw std::invalid_argument("SimilarityKernel: id list size mismatch");
  }
  if (symmetric_ && rows_ != cols_) {
    throw std::invalid_argument("SimilarityKernel: symmetric kernel must be square");
  }
  if (regularization_ < 0.0 || (!symmetric_ && regularization_ != 0.0)) {
    throw std::invalid_argument("SimilarityKernel: invalid regularization");
  }
}

SimilarityKernel SimilarityKernel::empty_columns(std::vector<PointId> row_ids) {
  const std::size_t n = row_ids.size();
  return SimilarityKernel(n, 0, {}, false, std::move(row_ids), {});
}

SimilarityKernel cosine_kernel(const EmbeddingMatrix& a) {
  const RowMajorMatrix x = normalized_rows(a);
  const std::size_t n = a.rows();
  std::vector<double> data(n * n);
  Eigen::Map<RowMajorMatrix> out(data.data(), static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(n));
  fill_symmetric(out, [&](Eigen::Index i0, Eigen::Index ni, Eigen::Index j0,
                          Eigen::Index nj) -> RowMajorMatrix {
    return x.middleRows(i0, ni) * x.middleRows(j0, nj).transpose();
  });
  return SimilarityKernel(n, n, std::move(data), true, a.ids(), a.ids());
}

SimilarityKernel cosine_kernel(const EmbeddingMatrix& a,
                               const EmbeddingMatrix& b) {
  if (&a == &b) return cosine_kernel(a);
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("cosine_kernel: dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
  }
  const RowMajorMatrix xa = normalized_rows(a);
  const RowMajorMatrix xb = normalized_rows(b);
  std::vector<double> data(a.rows() * b.rows());
  Eigen::Map<RowMajorMatrix> out(data.data(), static_cast<Eigen::Index>(a.rows()),
                                 static_cast<Eigen::Index>(b.rows()));
  if (a.rows() > 0 && b.rows() > 0) {
    out.noalias() = xa * xb.transpose();
    out = (0.5 * (out.array() + 1.0)).cwiseMax(0.0).cwiseMin(1.0).matrix();
  }
  return SimilarityKernel(a.rows(), b.rows(), std::move(data), false, a.ids(),
                          b.ids());
}

SimilarityKernel outer_cosine_kernel(const EmbeddingMatrix& r,
                                     const EmbeddingMatrix& x) {
  check_factor_pair(r, x);
  const RowMajorMatrix nr = normalized_rows(r);
  const RowMajorMatrix nx = normalized_rows(x);
  const std::size_t n = r.rows();
  std::vector<double> data(n * n);
  Eigen::Map<RowMajorMatrix> out(data.data(), static_cast<Eigen::Index>(n),
                                 static_cast<Eigen::Index>(n));
  fill_symmetric(out, [&](Eigen::Index i0, Eigen::Index ni, Eigen::Index j0,
                          Eigen::Index nj) -> RowMajorMatrix {
    RowMajorMatrix g = nr.middleRows(i0, ni) * nr.middleRows(j0, nj).transpose();
    g.array() *= (nx.middleRows(i0, ni) * nx.middleRows(j0, nj).transpose()).array();
    return g;
  });
  return SimilarityKernel(n, n, std::move(data), true, r.ids(), r.ids());
}

SimilarityKernel outer_cosine_kernel(const EmbeddingMatrix& ra,
                                     const EmbeddingMatrix& xa,
                                     const EmbeddingMatrix& rb,
                                     const EmbeddingMatrix& xb) {
  check_factor_pair(ra, xa);
  check_factor_pair(rb, xb);
  if (ra.dim() != rb.dim() || xa.dim() != xb.dim()) {
    throw std::invalid_argument("outer_cosine_kernel: dimension mismatch");
  }
  std::vector<double> data(ra.rows() * rb.rows());
  Eigen::Map<RowMajorMatrix> out(data.data(), static_cast<Eigen::Index>(ra.rows()),
                                 static_cast<Eigen::Index>(rb.rows()));
  if (ra.rows() > 0 && rb.rows() > 0) {
    fill_outer_cross(normalized_rows(ra), normalized_rows(xa), normalized_rows(rb),
                     normalized_rows(xb), out);
  }
  return SimilarityKernel(ra.rows(), rb.rows(), std::move(data), false, ra.ids(),
                          rb.ids());
}

SimilarityKernel regularize(const SimilarityKernel& k, double epsilon) {
  if (!k.symmetric()) {
    throw std::invalid_argument("regularize: kernel is not symmetric");
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("regularize: epsilon must be nonnegative");
  }
  std::vector<double> data = k.data();
  for (std::size_t i = 0; i < k.rows(); ++i) data[i * k.cols() + i] += epsilon;
  return SimilarityKernel(k.rows(), k.cols(), std::move(data), true,
                          k.row_ids(), k.col_ids(),
                          k.regularization() + epsilon);
}

SimilarityKernel regularize(SimilarityKernel&& k, double epsilon) {
  if (!k.symmetric()) {
    throw std::invalid_argument("regularize: kernel is not symmetric");
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("regularize: epsilon must be nonnegative");
  }
  for (std::size_t i = 0; i < k.rows_; ++i) k.data_[i * k.cols_ + i] += epsilon;
  k.regularization_ += epsilon;
  return std::move(k);
}

SimilarityKernel submatrix(const SimilarityKernel& k,
                           std::span<const Index> rows,
                           std::span<const Index> cols) {
  for (Index r : rows) {
    if (r >= k.rows()) throw std::invalid_argument("submatrix: row index out of range");
  }
  for (Index c : cols) {
    if (c >= k.cols()) throw std::invalid_argument("submatrix: column index out of range");
  }
  std::vector<double> data;
  data.reserve(rows.size() * cols.size());
  std::vector<PointId> row_ids;
  std::vector<PointId> col_ids;
  row_ids.reserve(rows.size());
  col_ids.reserve(cols.size());
  for (Index r : rows) {
    row_ids.push_back(k.row_ids()[r]);
    auto src = k.row(r);
    for (Index c : cols) data.push_back(src[c]);
  }
  for (Index c : cols) col_ids.push_back(k.col_ids()[c]);
  const bool symmetric =
      k.symmetric() && std::equal(rows.begin(), rows.end(), cols.begin(), cols.end());
  return SimilarityKernel(rows.size(), cols.size(), std::move(data), symmetric,
                          std::move(row_ids), std::move(col_ids),
                          symmetric ? k.regularization() : 0.0);
}

}  // namespace smi
