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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "smi/scenarios.hpp"

namespace smi {
namespace {

Blobs two_blobs(std::uint64_t seed) {
  const std::vector<int> counts = {50, 50};
  return make_blobs(2, counts, 4, 0.5, seed);
}

double accuracy(const SurrogateModel& m, const Blobs& b) {
  const std::vector<int> pred = hypothesized_labels(m, b.x);
  int hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == b.labels[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

Eigen::MatrixXd random_weights(int c, int d1, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd w(c, d1);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
  return w;
}

TEST(Train, SeparatesTwoBlobs) {
  const Blobs b = two_blobs(1);
  const SurrogateModel m = train(b.x, b.labels, 2);
  EXPECT_GE(accuracy(m, b), 0.98);
  EXPECT_TRUE(std::isfinite(m.final_loss()));
}

TEST(Train, Preconditions) {
  const Blobs b = two_blobs(2);
  const std::vector<int> one_class(b.labels.size(), 0);
  EXPECT_THROW(train(b.x, one_class, 2), std::invalid_argument);
  EXPECT_THROW(train(Features(0, 4), std::vector<int>{}, 2), std::invalid_argument);
  std::vector<int> out_of_range = b.labels;
  out_of_range[0] = 5;
  EXPECT_THROW(train(b.x, out_of_range, 2), std::invalid_argument);
}

TEST(Train, DeterministicAndOrderFree) {
  const Blobs b = two_blobs(3);
  TrainConfig cfg;
  cfg.seed = 9;
  cfg.epochs = 50;
  const SurrogateModel m1 = train(b.x, b.labels, 2, cfg);
  const SurrogateModel m2 = train(b.x, b.labels, 2, cfg);
  EXPECT_EQ(m1.weights(), m2.weights());

  std::vector<Eigen::Index> perm(b.labels.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(4));
  Features x(b.x.rows(), b.x.cols());
  std::vector<int> y(b.labels.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = b.x.row(perm[i]);
    y[i] = b.labels[perm[i]];
  }
  EXPECT_EQ(train(x, y, 2, cfg).weights(), m1.weights());
}

TEST(Predict, ZeroWeightsUniform) {
  const SurrogateModel m(Eigen::MatrixXd::Zero(4, 3));
  const Eigen::MatrixXd p = predict_proba(m, Features::Random(5, 2));
  for (Eigen::Index i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(p.data()[i], 0.25);
  EXPECT_THROW(predict_proba(m, Features::Random(5, 3)), std::invalid_argument);
}

TEST(Predict, LargeLogitDominates) {
  double last = 0.0;
  for (double logit : {1.0, 5.0, 20.0, 50.0}) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 2);
    w(1, 1) = logit;
    const double p = predict_proba(SurrogateModel(w), Features::Zero(1, 1))(0, 1);
    EXPECT_GT(p, last);
    last = p;
  }
  EXPECT_NEAR(last, 1.0, 1e-15);
}

TEST(Hypothesize, TieBreakAndClassLimit) {
  const SurrogateModel uniform(Eigen::MatrixXd::Zero(3, 2));
  EXPECT_EQ(hypothesized_labels(uniform, Features::Zero(2, 1)), (std::vector<int>{0, 0}));
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 2);
  w(2, 1) = 10.0;
  w(1, 1) = 5.0;
  const SurrogateModel m(w);
  EXPECT_EQ(hypothesized_labels(m, Features::Zero(1, 1)), (std::vector<int>{2}));
  EXPECT_EQ(hypothesized_labels(m, Features::Zero(1, 1), 2), (std::vector<int>{1}));
}

TEST(Gradient, ShapeAndConfidentZero) {
  const SurrogateModel m(random_weights(3, 5, 1));
  const Features x = Features::Random(4, 4);
  const std::vector<int> y = {0, 1, 2, 0};
  const std::vector<PointId> ids = {10, 11, 12, 13};
  const EmbeddingMatrix e = gradient_embeddings(m, x, y, ids);
  EXPECT_EQ(e.dim(), 15u);
  EXPECT_EQ(e.ids(), ids);

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  w(1, 1) = 2000.0;
  const std::vector<int> one = {1};
  const std::vector<PointId> id = {0};
  const EmbeddingMatrix z = gradient_embeddings(SurrogateModel(w), Features::Zero(1, 1), one, id);
  for (double v : z.row(0)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(cosine_kernel(z), std::invalid_argument);
}

TEST(Gradient, MatchesCentralDifferences) {
  const int c = 4, d = 6;
  const Eigen::MatrixXd w = random_weights(c, d + 1, 2) * 0.5;
  const SurrogateModel m(w);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const double h = 1e-6;
  for (int point = 0; point < 20; ++point) {
    Features x(1, d);
    for (int j = 0; j < d; ++j) x(0, j) = normal(rng);
    const std::vector<int> y = {point % c};
    const std::vector<PointId> id = {static_cast<PointId>(point)};
    const EmbeddingMatrix e = gradient_embeddings(m, x, y, id);
    const std::vector<double> xv(x.data(), x.data() + d);
    for (int k = 0; k < c; ++k) {
      for (int j = 0; j <= d; ++j) {
        Eigen::MatrixXd plus = w, minus = w;
        plus(k, j) += h;
        minus(k, j) -= h;
        const double numeric = (point_loss(plus, xv, y[0]) - point_loss(minus, xv, y[0])) / (2 * h);
        const double analytic = e.row(0)[static_cast<std::size_t>(k * (d + 1) + j)];
        EXPECT_NEAR(analytic, numeric, 1e-5 * std::max(1.0, std::abs(numeric)));
      }
    }
  }
}

TEST(Gradient, FactorsAreTheOuterProduct) {
  const SurrogateModel m(random_weights(3, 4, 5));
  const Features x = Features::Random(6, 3);
  const std::vector<int> y = {0, 1, 2, 2, 1, 0};
  const std::vector<PointId> ids = {0, 1, 2, 3, 4, 5};
  const EmbeddingMatrix e = gradient_embeddings(m, x, y, ids);
  const GradientFactors f = gradient_factors(m, x, y, ids);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_DOUBLE_EQ(e.row(i)[k * 4 + j], f.residual.row(i)[k] * f.input.row(i)[j]);
      }
    }
  }
}

TEST(Gradient, ExtraClassKeepsOrdering) {
  const Eigen::MatrixXd w = random_weights(3, 4, 6);
  Eigen::MatrixXd wide = Eigen::MatrixXd::Zero(4, 4);
  wide.topRows(3) = w;
  const Features x = Features::Random(10, 3);
  const std::vector<int> y(10, 0);
  const std::vector<PointId> ids = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_EQ(gradient_embeddings(SurrogateModel(wide), x, y, ids).dim(), 16u);
  const Eigen::MatrixXd p = predict_proba(SurrogateModel(w), x);
  const Eigen::MatrixXd q = predict_proba(SurrogateModel(wide), x);
  for (Eigen::Index i = 0; i < 10; ++i) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) EXPECT_EQ(p(i, a) < p(i, b), q(i, a) < q(i, b));
    }
  }
}

TEST(Uncertainty, Examples) {
  Eigen::MatrixXd p(3, 10);
  p.row(0).setConstant(0.1);
  p.row(1).setZero();
  p(1, 4) = 1.0;
  p.row(2).setZero();
  p(2, 0) = 0.6;
  p(2, 1) = 0.4;
  const UncertaintyScores s = uncertainty(p);
  EXPECT_NEAR(s.entropy[0], std::log(10.0), 1e-12);
  EXPECT_EQ(s.entropy[1], 0.0);
  EXPECT_EQ(s.margin[1], 1.0);
  EXPECT_EQ(s.least_confidence[1], 0.0);
  EXPECT_NEAR(s.margin[2], 0.2, 1e-12);
  EXPECT_NEAR(s.least_confidence[2], 0.4, 1e-12);
}

}  // namespace
}  // namespace smi
