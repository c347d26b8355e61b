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

#include "ura/tin_sic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ura::sic {

std::vector<double> compute_llrs(std::span<const Complex> y, int hypothesis, const GaussianMixture2& gm,
                                 double slot_power) {
  if (hypothesis != 0 && hypothesis != 1) throw std::invalid_argument("hypothesis must be 0 or 1");
  const auto l = static_cast<std::size_t>(hypothesis);
  const Complex h = std::conj(gm.means[l]);
  const double amp = std::sqrt(slot_power);
  const double scale = 4.0 * amp / (slot_power * gm.variances[l] + gm.ni_power);
  std::vector<double> llr(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) llr[t] = scale * (h * y[t]).real();
  return llr;
}

std::optional<TinResult> tin_decode(std::span<const Complex> residual, const polar::PolarCode& code,
                                    double slot_power, polar::ListDecoder& decoder) {
  GaussianMixture2 gm = em_cluster(residual, slot_power);
  for (int l : gm.hypothesis_order()) {
    const std::vector<double> llr = compute_llrs(residual, l, gm, slot_power);
    if (auto payload = decoder.decode(llr)) {
      TinResult out;
      out.bpsk = polar::bpsk_modulate(code.encode_payload(*payload), slot_power);
      out.message = std::move(*payload);
      out.hypothesis = l;
      out.mixture = std::move(gm);
      return out;
    }
  }
  return std::nullopt;
}

SicResult sic_subtract(std::span<const Complex> y, std::span<const std::vector<double>> codewords) {
  SicResult out;
  out.residual.assign(y.begin(), y.end());
  const auto ell = static_cast<Eigen::Index>(codewords.size());
  if (ell == 0) return out;
  const auto n = static_cast<Eigen::Index>(y.size());

  Eigen::MatrixXd x(n, ell);
  for (Eigen::Index c = 0; c < ell; ++c) {
    const auto& cw = codewords[static_cast<std::size_t>(c)];
    if (static_cast<Eigen::Index>(cw.size()) != n) throw std::invalid_argument("codeword length != slot length");
    for (Eigen::Index t = 0; t < n; ++t) x(t, c) = cw[static_cast<std::size_t>(t)];
  }
  Eigen::MatrixXd rhs(n, 2);
  for (Eigen::Index t = 0; t < n; ++t) {
    rhs(t, 0) = y[static_cast<std::size_t>(t)].real();
    rhs(t, 1) = y[static_cast<std::size_t>(t)].imag();
  }

  Eigen::MatrixXd gram = x.transpose() * x;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  out.condition = lo > 0.0 ? hi / lo : INFINITY;
  if (!(out.condition <= 1e12)) {
    gram.diagonal().array() += 1e-9 * gram.trace();
    out.regularized = true;
  }
  const Eigen::LDLT<Eigen::MatrixXd> solver(gram);
  Eigen::MatrixXd coef = solver.solve(x.transpose() * rhs);
  // One refinement sweep drives the residual to machine-precision orthogonality.
  Eigen::MatrixXd resid = rhs - x * coef;
  if (!out.regularized) {
    coef += solver.solve(x.transpose() * resid);
    resid = rhs - x * coef;
  }

  out.coefficients.resize(static_cast<std::size_t>(ell));
  for (Eigen::Index c = 0; c < ell; ++c) out.coefficients[static_cast<std::size_t>(c)] = {coef(c, 0), coef(c, 1)};
  for (Eigen::Index t = 0; t < n; ++t) out.residual[static_cast<std::size_t>(t)] = {resid(t, 0), resid(t, 1)};
  return out;
}

TinSicResult tinsic_decode(std::span<const Complex> y, const polar::PolarCode& code, double slot_power, int T,
                           polar::ListDecoder& decoder) {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  TinSicResult out;
  out.residual.assign(y.begin(), y.end());
  std::vector<std::vector<double>> decoded_codewords;
  double y_energy = 0.0;
  for (const Complex& v : y) y_energy += std::norm(v);
  for (int attempt = 0; attempt < T; ++attempt) {
    // The LLRs are scale invariant, so a residual of pure rounding error must not be decoded.
    if (!out.residual_energy.empty() && out.residual_energy.back() <= 1e-20 * y_energy) break;
    auto hit = tin_decode(out.residual, code, slot_power, decoder);
    if (!hit) break;
    if (std::find(out.messages.begin(), out.messages.end(), hit->message) != out.messages.end()) {
      out.stopped_on_duplicate = true;
      break;
    }
    out.messages.push_back(std::move(hit->message));
    decoded_codewords.push_back(std::move(hit->bpsk));
    SicResult sic = sic_subtract(y, decoded_codewords);
    out.residual = std::move(sic.residual);
    out.coefficients = std::move(sic.coefficients);
    double energy = 0.0;
    for (const Complex& v : out.residual) energy += std::norm(v);
    out.residual_energy.push_back(energy);
  }
  return out;
}

}  // namespace ura::sic
