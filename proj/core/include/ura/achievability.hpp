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

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ura/rng.hpp"
#include "ura/types.hpp"

namespace ura::bound {

/// Union-bound pairwise term min{1, (M - 1) (1 - g)^(n - 1)} with M = 2^log2_m.
double union_term(double log2_m, int n, double g);

/// Projection-decoder random-coding bound at a fixed fading coefficient,
/// estimated from full Gaussian codeword and noise vectors.
double p_star(double log2_m, int n, double snr, Complex h, int mc_noise, Rng& rng);

/// The same bound as a function of gamma = snr * |h|^2, tabulated on a dB grid
/// from one set of common random numbers. Output is non-increasing in gamma.
class ProjectionKernel {
 public:
  static constexpr double kMinDb = -40.0;
  static constexpr double kMaxDb = 40.0;
  static constexpr double kStepDb = 0.02;

  ProjectionKernel(double log2_m, int n, int samples, std::uint64_t seed);

  double operator()(double gamma) const;
  double at_db(double gamma_db) const;

  double log2_m() const { return log2_m_; }
  int n() const { return n_; }
  int samples() const { return samples_; }

 private:
  double log2_m_;
  int n_;
  int samples_;
  std::vector<double> table_;
};

using KernelFn = std::function<double(double gamma)>;

/// C(Ka, 2) / M + Ka * Q(n1, n P / P').
double p0_term(int ka, double log2_m, int n1, int n, double power, double pprime);

struct BoundQuery {
  double log2_m = 100.0;
  int n = 30000;
  int n1 = 512;
  double power = 0.0;   // P, frame units
  double pprime = 0.0;  // P' < P, frame units
  int ka = 100;
  int T = 14;
  int mc_fading = 2000;
  int mc_noise = 200;
  std::uint64_t seed = 1;

  /// n / n1, the slot power multiplier.
  double power_scale() const { return static_cast<double>(n) / n1; }
  /// floor(n / n1) slots in the aggregation.
  int slot_count() const { return n / n1; }
  void validate() const;
};

struct SlotBound {
  double value = 0.0;
  double ci95 = 0.0;
};

/// Per fading draw and step i = 1..min(r, T): |H_i|^2 / (1 + sum_{j>i} |H_j|^2)
/// with |H_1| >= ... >= |H_r|. Draws are a function of (seed, r, draw) only.
std::vector<double> ordered_fading_gains(int r, int T, int draws, std::uint64_t seed);

/// Per-slot genie bound for collision order r. pstar maps gamma to p*.
SlotBound tinsic_slot_bound(const BoundQuery& q, int r, const KernelFn& pstar);
SlotBound tinsic_slot_bound(const BoundQuery& q, int r, const KernelFn& pstar, double p0);

/// 1 - sum_r (1 - p_r) Binom(Ka - 1, 1/V)(r - 1); per_r[r - 1] holds p_r.
double aloha_aggregate(std::span<const double> per_r, int ka, int slots);

/// log of the Binom(Ka - 1, 1/V) pmf at r - 1.
double log_collision_pmf(int r, int ka, int slots);

struct BoundSetup {
  int k = 100;
  int n = 30000;
  int T = 14;
  double eps = 0.1;
  int mc_fading = 2000;
  int mc_noise = 200;
  std::uint64_t seed = 1;
};

struct OptimizeOptions {
  std::vector<double> pprime_ratios{0.90, 0.95, 0.99, 0.995, 0.999};
  std::vector<int> n1_grid{512};
  int bisection_iterations = 12;
  double start_ebno_db = 10.0;
  double floor_ebno_db = -20.0;
  double ceiling_ebno_db = 60.0;
};

struct OptimumPoint {
  int ka = 0;
  int n1 = 0;
  double pprime_ratio = 0.0;
  double ebno_db = 0.0;
  double eps_T = 1.0;
  double eps_T_ci95 = 0.0;
  double last_step_db = 0.0;
  bool feasible = false;
};

/// Smallest Eb/N0 with eps_T <= eps, minimized over P'/P and n1.
/// Evaluators are cached per n1, so one optimizer serves a whole Ka grid.
class EbnoOptimizer {
 public:
  EbnoOptimizer(BoundSetup setup, OptimizeOptions options);
  ~EbnoOptimizer();
  EbnoOptimizer(const EbnoOptimizer&) = delete;
  EbnoOptimizer& operator=(const EbnoOptimizer&) = delete;

  /// Prepares evaluators for every n1 up to the given load. Not thread-safe.
  void prepare(int max_ka);
  /// Thread-safe once prepare() covered ka.
  OptimumPoint optimize(int ka) const;
  /// eps_T at a fixed operating point.
  double eps_t(int ka, int n1, double power, double pprime_ratio) const;
  /// eps_T and its 95% half-width from the fading Monte-Carlo.
  SlotBound eps_t_ci(int ka, int n1, double power, double pprime_ratio) const;

  const BoundSetup& setup() const { return setup_; }
  const OptimizeOptions& options() const { return options_; }

 private:
  struct Evaluator;
  const Evaluator& evaluator(int n1) const;
  OptimumPoint optimize_n1(int ka, const Evaluator& ev) const;

  BoundSetup setup_;
  OptimizeOptions options_;
  std::vector<std::unique_ptr<Evaluator>> evaluators_;
};

std::vector<OptimumPoint> optimize_ebno(const BoundSetup& setup, std::span<const int> ka_grid,
                                        const OptimizeOptions& options);

}  // namespace ura::bound
