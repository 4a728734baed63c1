// Copyright 2026 The CoresetKit Authors.
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

#include "coresetkit/diversity.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "coresetkit/error.hpp"

namespace coresetkit::diversity {

std::vector<double> NearestSelectedDistances(const EmbeddingMatrix& m,
                                             const std::vector<std::size_t>& selected) {
  if (selected.empty()) throw InvalidArgument("selection is empty");
  for (std::size_t s : selected) {
    if (s >= m.rows()) throw InvalidArgument("selected index out of range");
  }
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s : selected) best = std::min(best, m.SquaredDistance(i, s));
    out[i] = std::sqrt(best);
  }
  return out;
}

CoverageStats Coverage(const EmbeddingMatrix& m, const dq::CoresetSelection& sel,
                       const dq::BinPartition& bins) {
  const auto nearest = NearestSelectedDistances(m, sel.selected);
  CoverageStats stats;
  double sum = 0.0;
  for (double d : nearest) {
    sum += d;
    stats.max_nn_distance = std::max(stats.max_nn_distance, d);
  }
  stats.mean_nn_distance = sum / static_cast<double>(nearest.size());

  const auto& s = sel.selected;
  if (s.size() > 1) {
    double pair_sum = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        pair_sum += std::sqrt(m.SquaredDistance(s[a], s[b]));
      }
    }
    const double pairs = static_cast<double>(s.size()) * static_cast<double>(s.size() - 1) / 2.0;
    stats.mean_pairwise_selected = pair_sum / pairs;
  }

  if (bins.bins.empty()) throw InvalidArgument("coverage needs a bin partition");
  std::vector<std::size_t> bin_of(m.rows(), bins.bins.size());
  for (std::size_t b = 0; b < bins.bins.size(); ++b) {
    for (std::size_t idx : bins.bins[b]) {
      if (idx >= m.rows()) throw InvalidArgument("bin index out of range");
      bin_of[idx] = b;
    }
  }
  std::vector<char> occupied(bins.bins.size(), 0);
  for (std::size_t idx : s) {
    if (bin_of[idx] < occupied.size()) occupied[bin_of[idx]] = 1;
  }
  stats.bin_occupancy =
      static_cast<double>(std::count(occupied.begin(), occupied.end(), 1)) /
      static_cast<double>(occupied.size());
  return stats;
}

Projection Project2d(const EmbeddingMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t d = m.dim();
  if (n < 2) throw InvalidArgument("projection needs at least two rows");

  Eigen::MatrixXd x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    for (std::size_t k = 0; k < d; ++k) x(i, k) = row[k];
  }
  const double scale = x.squaredNorm() / static_cast<double>(n);
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

  Projection out;
  out.x.assign(n, 0.0);
  out.y.assign(n, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  const auto& values = solver.eigenvalues();  // ascending
  if (values(d - 1) <= 1e-20 * std::max(scale, std::numeric_limits<double>::min())) {
    out.zero_variance = true;
    return out;
  }

  auto component = [&](std::size_t rank) -> Eigen::VectorXd {
    Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(d - 1 - rank));
    Eigen::Index lead = 0;
    for (Eigen::Index k = 1; k < v.size(); ++k) {
      if (std::abs(v(k)) > std::abs(v(lead))) lead = k;
    }
    if (v(lead) < 0) v = -v;
    return v;
  };
  const Eigen::VectorXd px = x * component(0);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = px(static_cast<Eigen::Index>(i));
  if (d >= 2) {
    const Eigen::VectorXd py = x * component(1);
    for (std::size_t i = 0; i < n; ++i) out.y[i] = py(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace coresetkit::diversity
