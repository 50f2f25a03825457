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
// Embedding matrices and dense similarity kernels.
//
// Every kernel produced here holds rescaled cosine similarities (1 + cos) / 2,
// so entries lie in [0, 1] and a kernel of a matrix with itself is positive
// semidefinite. Log-determinant functions additionally need a strictly
// positive definite kernel, which regularize() provides.
//

#ifndef SMI_SIMILARITY_HPP_
#define SMI_SIMILARITY_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace smi {

using Index = std::size_t;
using PointId = std::int64_t;

// Default diagonal regularization for the log-determinant family.
inline constexpr double kLogDetRegularization = 1e-2;

// Row-major matrix of per-point embedding vectors. Rows carry external ids.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Validates finiteness, shape and id uniqueness.
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> data,
                  std::vector<PointId> ids);
  // Ids default to 0..rows-1.
  EmbeddingMatrix(std::size_t rows, std::size_t dim, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const std::vector<double>& data() const { return data_; }
  const std::vector<PointId>& ids() const { return ids_; }

  // Rows in the given order, ids carried along.
  EmbeddingMatrix select(std::span<const Index> rows) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
  std::vector<PointId> ids_;
};

// Dense row-major similarity matrix, square-symmetric or rectangular.
class SimilarityKernel {
 public:
  SimilarityKernel() = default;
  SimilarityKernel(std::size_t rows, std::size_t cols, std::vector<double> data,
                   bool symmetric, std::vector<PointId> row_ids,
                   std::vector<PointId> col_ids, double regularization = 0.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool symmetric() const { return symmetric_; }
  double regularization() const { return regularization_; }
  const std::vector<PointId>& row_ids() const { return row_ids_; }
  const std::vector<PointId>& col_ids() const { return col_ids_; }
  const std::vector<double>& data() const { return data_; }

  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  // Shape-only empty kernel with the given row ids and no columns.
  static SimilarityKernel empty_columns(std::vector<PointId> row_ids);

  friend SimilarityKernel regularize(SimilarityKernel&& k, double epsilon);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  bool symmetric_ = false;
  std::vector<PointId> row_ids_;
  std::vector<PointId> col_ids_;
  double regularization_ = 0.0;
};

// Self-similarity of `a`: symmetric, unit diagonal.
SimilarityKernel cosine_kernel(const EmbeddingMatrix& a);

// Cross-similarity rows(a) x rows(b); symmetric iff `a` and `b` are the same
// object. Throws std::invalid_argument on dimension mismatch or a zero row.
SimilarityKernel cosine_kernel(const EmbeddingMatrix& a,
                               const EmbeddingMatrix& b);

// Cosine similarity of the row-wise outer products r_i (x) x_i without forming
// them: cos(r_i (x) x_i, r_j (x) x_j) = cos(r_i, r_j) * cos(x_i, x_j).
// Ids come from `r`; `r` and `x` must have the same row count.
SimilarityKernel outer_cosine_kernel(const EmbeddingMatrix& r,
                                     const EmbeddingMatrix& x);
SimilarityKernel outer_cosine_kernel(const EmbeddingMatrix& ra,
                                     const EmbeddingMatrix& xa,
                                     const EmbeddingMatrix& rb,
                                     const EmbeddingMatrix& xb);

// Adds `epsilon` to the diagonal of a symmetric kernel.
SimilarityKernel regularize(const SimilarityKernel& k, double epsilon);
SimilarityKernel regularize(SimilarityKernel&& k, double epsilon);

// Block k[rows, cols]; symmetric iff rows == cols and k is symmetric.
SimilarityKernel submatrix(const SimilarityKernel& k,
                           std::span<const Index> rows,
                           std::span<const Index> cols);

}  // namespace smi

#endif  // SMI_SIMILARITY_HPP_
