// Copyright 2026 The urasim Authors
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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ura/tin_sic.hpp"

namespace ura::sic {

namespace {

using Eigen::Matrix2d;
using Eigen::Vector2d;

inline double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Total (not per-point) log-likelihood of the mirrored mixture.
double mixture_log_likelihood(const std::vector<Vector2d>& pts, const Vector2d& m, const Matrix2d& cov) {
  const Matrix2d inv = cov.inverse();
  const double log_det = std::log(cov.determinant());
  const Vector2d im = inv * m;
  const double c = m.dot(im);
  const double base = -std::log(2.0 * std::numbers::pi) - 0.5 * log_det - 0.5 * c;
  double ll = 0.0;
  for (const Vector2d& p : pts) ll += base - 0.5 * p.dot(inv * p) + log_cosh(im.dot(p));
  return ll;
}

Complex to_complex(const Vector2d& v) { return {v.x(), v.y()}; }

}  // namespace

Complex GaussianMixture2::signal_mean(double slot_power) const { return means[0] * std::sqrt(slot_power); }

std::array<int, 2> GaussianMixture2::hypothesis_order() const {
  // Mirrored means have equal magnitude; the component carrying more
  // posterior mass goes first, component 0 on ties.
  if (responsibility_mass[1] > responsibility_mass[0]) return {1, 0};
  return {0, 1};
}

GaussianMixture2 em_cluster(std::span<const Complex> y, double slot_power, const EmOptions& options) {
  if (y.size() < 2) throw std::invalid_argument("em_cluster needs at least two samples");
  if (!(slot_power > 0.0)) throw std::invalid_argument("slot power must be > 0");
  const auto n = static_cast<double>(y.size());

  std::vector<Vector2d> pts;
  pts.reserve(y.size());
  Matrix2d second = Matrix2d::Zero();
  for (const Complex& v : y) {
    pts.emplace_back(v.real(), v.imag());
    second += pts.back() * pts.back().transpose();
  }
  second /= n;
  const double radius2 = second.trace();
  const double floor = std::max(1e-12 * radius2, 1e-15);

  const Eigen::SelfAdjointEigenSolver<Matrix2d> eig(second);
  Vector2d axis = eig.eigenvectors().col(1);
  if (axis.x() < 0.0 || (axis.x() == 0.0 && axis.y() < 0.0)) axis = -axis;

  GaussianMixture2 gm;
  Vector2d m = axis * std::sqrt(radius2);
  Matrix2d cov = Matrix2d::Identity() * std::max(eig.eigenvalues()(0), 1e-3 * radius2 + floor);
  std::vector<double> w(pts.size(), 0.0);

  auto singular = [&](const Matrix2d& c) {
    const Eigen::SelfAdjointEigenSolver<Matrix2d> e(c);
    return !(e.eigenvalues()(0) > 1e-10 * radius2 + floor);
  };

  bool degenerate = radius2 <= 0.0;
  if (!degenerate) {
    gm.log_likelihood.push_back(mixture_log_likelihood(pts, m, cov));
    for (int it = 0; it < options.max_iterations; ++it) {
      // E-step: w_t = E[sign | y_t] = tanh(m' S^-1 y_t).
      const Vector2d im = cov.inverse() * m;
      Vector2d next_m = Vector2d::Zero();
      for (std::size_t t = 0; t < pts.size(); ++t) {
        w[t] = std::tanh(im.dot(pts[t]));
        next_m += w[t] * pts[t];
      }
      // M-step under the tied-mean, shared-covariance, equal-weight model.
      next_m /= n;
      const Matrix2d next_cov = second - next_m * next_m.transpose();
      gm.iterations = it + 1;
      if (singular(next_cov)) {
        degenerate = true;
        break;
      }
      m = next_m;
      cov = next_cov;
      const double ll = mixture_log_likelihood(pts, m, cov);
      const double gain = ll - gm.log_likelihood.back();
      gm.log_likelihood.push_back(ll);
      if (gain < options.tolerance_per_point * n) break;
    }
  }

  double mass0 = 0.0;
  if (degenerate) {
    // Single cluster folded onto the principal axis.
    m = Vector2d::Zero();
    for (const Vector2d& p : pts) m += (axis.dot(p) >= 0.0 ? 1.0 : -1.0) * p;
    m /= n;
    for (const Vector2d& p : pts) mass0 += axis.dot(p) >= 0.0 ? 1.0 : 0.0;
    if (m.dot(axis) < 0.0) m = -m;
    cov = second - m * m.transpose();
    const Eigen::SelfAdjointEigenSolver<Matrix2d> e(cov);
    if (e.eigenvalues()(0) < 0.0) cov -= Matrix2d::Identity() * e.eigenvalues()(0);
  } else {
    for (double wt : w) mass0 += 0.5 * (1.0 + wt);
  }

  const double amp = std::sqrt(slot_power);
  gm.degenerate = degenerate;
  gm.covariance = cov;
  gm.means = {to_complex(m) / amp, -to_complex(m) / amp};
  gm.ni_power = std::max(cov.trace(), floor);
  gm.responsibility_mass = {mass0, n - mass0};
  for (int l = 0; l < 2; ++l) {
    const double count = std::max(gm.responsibility_mass[static_cast<std::size_t>(l)], 1.0);
    gm.variances[static_cast<std::size_t>(l)] = gm.ni_power / (slot_power * count);
  }
  return gm;
}

}  // namespace ura::sic
