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

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ura/list_decoder.hpp"
#include "ura/polar_code.hpp"
#include "ura/types.hpp"

namespace ura::sic {

/// Two-component complex Gaussian mixture over the fading of the strongest
/// remaining user. Means are in the fading domain (cluster centre divided by
/// sqrt(P_slot)) and mirror each other: means[1] == -means[0].
struct GaussianMixture2 {
  std::array<double, 2> weights{0.5, 0.5};
  std::array<Complex, 2> means{};
  std::array<double, 2> variances{};  // P-hat: uncertainty of each mean, fading domain
  double ni_power = 1.0;              // sigma-hat^2: noise plus interference, complex variance
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();  // shared, signal domain (re, im)
  std::array<double, 2> responsibility_mass{};               // sum of posteriors per component
  bool degenerate = false;
  int iterations = 0;
  std::vector<double> log_likelihood;  // after init and after every M-step

  /// Signal-domain centre of component 0.
  Complex signal_mean(double slot_power) const;
  /// Component indices in decoding order.
  std::array<int, 2> hypothesis_order() const;
};

struct EmOptions {
  int max_iterations = 100;
  double tolerance_per_point = 1e-6;
};

/// Antisymmetric (+m, -m) two-component EM over (Re y, Im y) with shared full
/// covariance and equal weights. Collapse to a singular covariance yields the
/// sign-aligned single-cluster fallback with degenerate = true.
GaussianMixture2 em_cluster(std::span<const Complex> y, double slot_power, const EmOptions& options = {});

/// Per-symbol LLRs with the fading marginalised over component `hypothesis`:
/// 4 sqrt(P) Re(conj(H_l) y_t) / (P * P_l + sigma^2).
std::vector<double> compute_llrs(std::span<const Complex> y, int hypothesis, const GaussianMixture2& gm,
                                 double slot_power);

struct TinResult {
  Bits message;               // k payload bits
  std::vector<double> bpsk;   // re-encoded codeword at slot power
  int hypothesis = 0;
  GaussianMixture2 mixture;
};

/// Treat-interference-as-noise attempt on a residual: EM, then both GM
/// hypotheses through the CRC-aided list decoder. At most one is returned.
std::optional<TinResult> tin_decode(std::span<const Complex> residual, const polar::PolarCode& code,
                                    double slot_power, polar::ListDecoder& decoder);

struct SicResult {
  std::vector<Complex> coefficients;  // H-hat_l per decoded codeword, fading domain
  ComplexSignal residual;             // Y - sum_l H-hat_l X_l
  double condition = 1.0;             // Gram matrix condition number
  bool regularized = false;           // ridge applied (rank deficient)
};

/// Least-squares projection of Y off span{X_1..X_l}. Codewords are the BPSK
/// vectors at slot power, so coefficients are fading estimates.
SicResult sic_subtract(std::span<const Complex> y, std::span<const std::vector<double>> codewords);

struct TinSicResult {
  std::vector<Bits> messages;          // unique, in decoding order
  std::vector<Complex> coefficients;   // final LS fading estimates
  ComplexSignal residual;
  std::vector<double> residual_energy; // ||Y'||^2 after each cancellation
  bool stopped_on_duplicate = false;
};

/// Up to T TIN attempts, each followed by a joint LS re-fit of all decoded
/// codewords against the original Y. Stops on failure or duplicate.
TinSicResult tinsic_decode(std::span<const Complex> y, const polar::PolarCode& code, double slot_power, int T,
                           polar::ListDecoder& decoder);

/// Convenience owner of a list decoder for repeated slot decoding on one thread.
class SlotReceiver {
 public:
  SlotReceiver(const polar::PolarCode& code, double slot_power, int T)
      : code_(code), decoder_(code, code.spec().list_size), slot_power_(slot_power), T_(T) {}

  TinSicResult operator()(std::span<const Complex> y) { return tinsic_decode(y, code_, slot_power_, T_, decoder_); }

 private:
  const polar::PolarCode& code_;
  polar::ListDecoder decoder_;
  double slot_power_;
  int T_;
};

}  // namespace ura::sic
