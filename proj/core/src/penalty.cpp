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

#include "smi/penalty.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace smi {

double t_critical(int df, double alpha) {
  if (df < 1) throw std::invalid_argument("t_critical: df must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("t_critical: alpha in (0,1)");
  boost::math::students_t dist(df);
  return boost::math::quantile(boost::math::complement(dist, alpha / 2.0));
}

double paired_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t: length mismatch");
  const std::size_t s = a.size();
  if (s < 2) throw std::invalid_argument("paired_t: need at least two seeds");
  double mean = 0.0;
  for (std::size_t k = 0; k < s; ++k) mean += a[k] - b[k];
  mean /= static_cast<double>(s);
  double ss = 0.0;
  for (std::size_t k = 0; k < s; ++k) {
    const double d = a[k] - b[k] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(s - 1));
  if (sd == 0.0) {
    if (mean == 0.0) return 0.0;
    return mean > 0.0 ? std::numeric_limits<double>::infinity()
                      : -std::numeric_limits<double>::infinity();
  }
  return mean / (sd / std::sqrt(static_cast<double>(s)));
}

PenaltyMatrix penalty_matrix(const std::vector<std::string>& methods,
                             const std::vector<Trace>& traces, double alpha) {
  const std::size_t m = methods.size();
  if (traces.size() != m) throw std::invalid_argument("penalty_matrix: one trace per method");
  if (m == 0) throw std::invalid_argument("penalty_matrix: no methods");
  const std::size_t seeds = traces[0].size();
  if (seeds < 2) throw std::invalid_argument("penalty_matrix: need at least two seeds");
  const std::size_t rounds = traces[0][0].size();
  if (rounds == 0) throw std::invalid_argument("penalty_matrix: empty traces");
  for (const Trace& t : traces) {
    if (t.size() != seeds) throw std::invalid_argument("penalty_matrix: seed counts differ");
    for (const auto& r : t) {
      if (r.size() != rounds) throw std::invalid_argument("penalty_matrix: round grids differ");
    }
  }
  const double crit = t_critical(static_cast<int>(seeds) - 1, alpha);
  Eigen::MatrixXi wins = Eigen::MatrixXi::Zero(m, m);
  std::vector<double> a(seeds), b(seeds);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        for (std::size_t k = 0; k < seeds; ++k) {
          a[k] = traces[i][k][r];
          b[k] = traces[j][k][r];
        }
        const double t = paired_t(a, b);
        if (t > crit) ++wins(i, j);
        if (t < -crit) ++wins(j, i);
      }
    }
  }
  PenaltyMatrix out;
  out.methods = methods;
  out.alpha = alpha;
  out.rounds = static_cast<int>(rounds);
  out.cells = wins.cast<double>() / static_cast<double>(rounds);
  return out;
}

void write_penalty_csv(const PenaltyMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "method";
  for (const auto& name : m.methods) out << "," << name;
  out << "\n";
  for (std::size_t i = 0; i < m.methods.size(); ++i) {
    out << m.methods[i];
    for (std::size_t j = 0; j < m.methods.size(); ++j) out << "," << m.cells(i, j);
    out << "\n";
  }
}

}  // namespace smi
