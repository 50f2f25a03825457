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

#include "smi/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace smi {
namespace {

Eigen::MatrixXd with_bias(const Features& x) {
  Eigen::MatrixXd out(x.rows(), x.cols() + 1);
  out.leftCols(x.cols()) = x;
  out.col(x.cols()).setOnes();
  return out;
}

// Row-wise softmax, in place.
void softmax_rows(Eigen::MatrixXd& logits) {
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    auto row = logits.row(i);
    row.array() -= row.maxCoeff();
    row = row.array().exp().matrix();
    row /= row.sum();
  }
}

double objective(const Eigen::MatrixXd& x1, const std::vector<int>& y,
                 const Eigen::MatrixXd& w, double l2, Eigen::MatrixXd* proba) {
  Eigen::MatrixXd logits = x1 * w.transpose();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double m = logits.row(i).maxCoeff();
    const double lse = m + std::log((logits.row(i).array() - m).exp().sum());
    loss += lse - logits(i, y[i]);
  }
  loss /= static_cast<double>(x1.rows());
  loss += 0.5 * l2 * w.leftCols(w.cols() - 1).squaredNorm();
  if (proba != nullptr) {
    softmax_rows(logits);
    *proba = std::move(logits);
  }
  return loss;
}

void check_dim(const SurrogateModel& m, const Features& x) {
  if (m.num_classes() == 0) throw std::invalid_argument("surrogate: untrained model");
  if (x.cols() != m.dim()) {
    throw std::invalid_argument("surrogate: feature dimension " + std::to_string(x.cols()) +
                                " does not match model dimension " +
                                std::to_string(m.dim()));
  }
}

}  // namespace

SurrogateModel::SurrogateModel(Eigen::MatrixXd weights, TrainConfig config)
    : weights_(std::move(weights)), config_(config) {
  if (weights_.rows() < 1 || weights_.cols() < 2) {
    throw std::invalid_argument("SurrogateModel: weights must be C x (d+1)");
  }
}

SurrogateModel train(const Features& x, std::span<const int> labels, int num_classes,
                     const TrainConfig& config) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (n == 0) throw std::invalid_argument("train: empty training set");
  if (labels.size() != n) throw std::invalid_argument("train: label count mismatch");
  std::set<int> distinct;
  for (int y : labels) {
    if (y < 0 || y >= num_classes) throw std::invalid_argument("train: label out of range");
    distinct.insert(y);
  }
  if (distinct.size() < 2) throw std::invalid_argument("train: need at least two classes");
  if (!x.allFinite()) throw std::invalid_argument("train: non-finite features");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (labels[a] != labels[b]) return labels[a] < labels[b];
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (x(a, c) != x(b, c)) return x(a, c) < x(b, c);
    }
    return false;
  });
  Eigen::MatrixXd x1(n, x.cols() + 1);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1.row(i).head(x.cols()) = x.row(order[i]);
    x1(i, x.cols()) = 1.0;
    y[i] = labels[order[i]];
  }
  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, num_classes);
  for (std::size_t i = 0; i < n; ++i) onehot(i, y[i]) = 1.0;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, config.init_scale);
  Eigen::MatrixXd w(num_classes, x.cols() + 1);
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = normal(rng);
  }

  double lr = config.learning_rate;
  int halvings = 0;
  Eigen::MatrixXd proba;
  double loss = objective(x1, y, w, config.l2, &proba);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Eigen::MatrixXd grad = (proba - onehot).transpose() * x1 / static_cast<double>(n);
    grad.leftCols(grad.cols() - 1) += config.l2 * w.leftCols(w.cols() - 1);
    Eigen::MatrixXd next = w - lr * grad;
    Eigen::MatrixXd next_proba;
    const double next_loss = objective(x1, y, next, config.l2, &next_proba);
    if (next_loss > loss && halvings < config.max_halvings) {
      lr *= 0.5;
      ++halvings;
      continue;
    }
    w = std::move(next);
    proba = std::move(next_proba);
    loss = next_loss;
  }

  SurrogateModel model(std::move(w), config);
  model.final_loss_ = loss;
  return model;
}

Eigen::MatrixXd predict_proba(const SurrogateModel& m, const Features& x) {
  check_dim(m, x);
  Eigen::MatrixXd logits = with_bias(x) * m.weights().transpose();
  softmax_rows(logits);
  return logits;
}

std::vector<int> hypothesized_labels(const SurrogateModel& m, const Features& x,
                                     int classes) {
  const Eigen::MatrixXd p = predict_proba(m, x);
  const int c = (classes <= 0 || classes > m.num_classes()) ? m.num_classes() : classes;
  std::vector<int> out(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    int best = 0;
    for (int k = 1; k < c; ++k) {
      if (p(i, k) > p(i, best)) best = k;
    }
    out[i] = best;
  }
  return out;
}

EmbeddingMatrix gradient_embeddings(const SurrogateModel& m, const Features& x,
                                    std::span<const int> labels,
                                    std::span<const PointId> ids) {
  check_dim(m, x);
  const auto n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n || ids.size() != n) {
    throw std::invalid_argument("gradient_embeddings: label/id count mismatch");
  }
  const Eigen::MatrixXd p = predict_proba(m, x);
  const std::size_t c = m.num_classes();
  const std::size_t d1 = m.dim() + 1;
  std::vector<double> data(n * c * d1);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= static_cast<int>(c)) {
      throw std::invalid_argument("gradient_embeddings: label out of range");
    }
    double* out = data.data() + i * c * d1;
    for (std::size_t k = 0; k < c; ++k) {
      const double r = p(i, k) - (static_cast<int>(k) == labels[i] ? 1.0 : 0.0);
      for (std::size_t j = 0; j + 1 < d1; ++j) out[k * d1 + j] = r * x(i, j);
      out[k * d1 + d1 - 1] = r;
    }
  }
  return EmbeddingMatrix(n, c * d1, std::move(data),
                         std::vector<PointId>(ids.begin(), ids.end()));
}

GradientFactors gradient_factors(const SurrogateModel& m, const Features& x,
                                 std::span<const int> labels,
                                 std::span<const PointId> ids) {
  check_dim(m, x);
  const auto n = static_cast<std::size_t>(x.rows());
  if (labels.size() != n || ids.size() != n) {
    throw std::invalid_argument("gradient_factors: label/id count mismatch");
  }
  const Eigen::MatrixXd p = predict_proba(m, x);
  const std::size_t c = m.num_classes();
  const std::size_t d1 = m.dim() + 1;
  std::vector<double> res(n * c);
  std::vector<double> in(n * d1);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= static_cast<int>(c)) {
      throw std::invalid_argument("gradient_factors: label out of range");
    }
    for (std::size_t k = 0; k < c; ++k) {
      res[i * c + k] = p(i, k) - (static_cast<int>(k) == labels[i] ? 1.0 : 0.0);
    }
    for (std::size_t j = 0; j + 1 < d1; ++j) in[i * d1 + j] = x(i, j);
    in[i * d1 + d1 - 1] = 1.0;
  }
  std::vector<PointId> id_copy(ids.begin(), ids.end());
  return {EmbeddingMatrix(n, c, std::move(res), id_copy),
          EmbeddingMatrix(n, d1, std::move(in), std::move(id_copy))};
}

UncertaintyScores uncertainty(const Eigen::MatrixXd& proba) {
  UncertaintyScores s;
  const auto n = static_cast<std::size_t>(proba.rows());
  s.entropy.resize(n);
  s.margin.resize(n);
  s.least_confidence.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double h = 0.0;
    double first = -1.0;
    double second = -1.0;
    for (Eigen::Index k = 0; k < proba.cols(); ++k) {
      const double v = proba(i, k);
      if (v > 0.0) h -= v * std::log(v);
      if (v > first) {
        second = first;
        first = v;
      } else if (v > second) {
        second = v;
      }
    }
    s.entropy[i] = std::max(h, 0.0);
    s.margin[i] = proba.cols() > 1 ? first - second : 1.0;
    s.least_confidence[i] = 1.0 - first;
  }
  return s;
}

UncertaintyScores uncertainty(const SurrogateModel& m, const Features& x) {
  return uncertainty(predict_proba(m, x));
}

double point_loss(const Eigen::MatrixXd& weights, std::span<const double> x, int y) {
  const Eigen::Index d = weights.cols() - 1;
  if (static_cast<Eigen::Index>(x.size()) != d) {
    throw std::invalid_argument("point_loss: dimension mismatch");
  }
  Eigen::VectorXd x1(d + 1);
  for (Eigen::Index j = 0; j < d; ++j) x1(j) = x[j];
  x1(d) = 1.0;
  const Eigen::VectorXd logits = weights * x1;
  const double m = logits.maxCoeff();
  return m + std::log((logits.array() - m).exp().sum()) - logits(y);
}

void write_weights_csv(const SurrogateModel& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "class";
  for (int j = 0; j < m.dim(); ++j) out << ",w" << j;
  out << ",bias\n";
  for (int k = 0; k < m.num_classes(); ++k) {
    out << k;
    for (Eigen::Index j = 0; j < m.weights().cols(); ++j) out << "," << m.weights()(k, j);
    out << "\n";
  }
}

}  // namespace smi
