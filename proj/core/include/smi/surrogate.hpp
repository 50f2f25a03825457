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

// Multinomial logistic regression standing in for the deep classifier.

#ifndef SMI_SURROGATE_HPP_
#define SMI_SURROGATE_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "smi/similarity.hpp"

namespace smi {

using Features = Eigen::MatrixXd;  // one row per point

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 300;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  double init_scale = 0.01;
  int max_halvings = 10;
};

class SurrogateModel {
 public:
  SurrogateModel() = default;
  // weights is C x (d+1), last column the bias.
  explicit SurrogateModel(Eigen::MatrixXd weights, TrainConfig config = {});

  int num_classes() const { return static_cast<int>(weights_.rows()); }
  int dim() const { return static_cast<int>(weights_.cols()) - 1; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const TrainConfig& config() const { return config_; }
  double final_loss() const { return final_loss_; }

 private:
  friend SurrogateModel train(const Features&, std::span<const int>, int,
                              const TrainConfig&);
  Eigen::MatrixXd weights_;
  TrainConfig config_;
  double final_loss_ = 0.0;
};

// Full-batch gradient descent on mean cross-entropy plus (l2/2)|W|^2 (bias
// excluded) from a seeded N(0, init_scale^2) start. A step that raises the
// loss is undone and the rate halved, at most max_halvings times. Rows are
// put in a canonical order first, so the result does not depend on the
// order of the training set. Throws std::invalid_argument for an empty set,
// fewer than two distinct labels or labels outside [0, num_classes).
SurrogateModel train(const Features& x, std::span<const int> labels, int num_classes,
                     const TrainConfig& config = {});

Eigen::MatrixXd predict_proba(const SurrogateModel& m, const Features& x);

// Row argmax, lowest class on ties. `classes` limits the argmax to the first
// `classes` columns (0 = all), used to ignore the OOD class at test time.
std::vector<int> hypothesized_labels(const SurrogateModel& m, const Features& x,
                                     int classes = 0);

// Per point, flatten((p - e_y) (x;1)^T) in class-major order: C*(d+1) values.
EmbeddingMatrix gradient_embeddings(const SurrogateModel& m, const Features& x,
                                    std::span<const int> labels,
                                    std::span<const PointId> ids);

// The same embeddings in factored form: row i of `residual` is p - e_y and row
// i of `input` is (x;1), so the embedding is their outer product.
struct GradientFactors {
  EmbeddingMatrix residual;
  EmbeddingMatrix input;

  GradientFactors select(std::span<const Index> rows) const {
    return {residual.select(rows), input.select(rows)};
  }
  std::size_t rows() const { return residual.rows(); }
};

GradientFactors gradient_factors(const SurrogateModel& m, const Features& x,
                                 std::span<const int> labels,
                                 std::span<const PointId> ids);

struct UncertaintyScores {
  std::vector<double> entropy;
  std::vector<double> margin;
  std::vector<double> least_confidence;
};

UncertaintyScores uncertainty(const Eigen::MatrixXd& proba);
UncertaintyScores uncertainty(const SurrogateModel& m, const Features& x);

// Per-point cross-entropy -log p_y, used to check the embeddings numerically.
double point_loss(const Eigen::MatrixXd& weights, std::span<const double> x, int y);

void write_weights_csv(const SurrogateModel& m, const std::filesystem::path& path);

}  // namespace smi

#endif  // SMI_SURROGATE_HPP_
