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

#ifndef SMI_PENALTY_HPP_
#define SMI_PENALTY_HPP_

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace smi {

// traces[seed][round]
using Trace = std::vector<std::vector<double>>;

struct PenaltyMatrix {
  std::vector<std::string> methods;
  // cells(i, j): fraction of rounds in which method i beat method j.
  Eigen::MatrixXd cells;
  double alpha = 0.05;
  int rounds = 0;
};

// Two-tailed critical value of Student's t with `df` degrees of freedom.
double t_critical(int df, double alpha);

// Paired t statistic of a - b across seeds: mean(d) / (sd(d) / sqrt(S)).
// Zero when every difference is zero, +/-inf when the differences are equal
// but nonzero.
double paired_t(std::span<const double> a, std::span<const double> b);

// For every round and pair (i, j), adds 1/N to (i, j) when t > t_crit and to
// (j, i) when t < -t_crit. Needs at least two seeds and equal grids.
PenaltyMatrix penalty_matrix(const std::vector<std::string>& methods,
                             const std::vector<Trace>& traces, double alpha = 0.05);

void write_penalty_csv(const PenaltyMatrix& m, const std::filesystem::path& path);

}  // namespace smi

#endif  // SMI_PENALTY_HPP_
