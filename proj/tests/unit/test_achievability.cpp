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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ura/achievability.hpp"
#include "ura/rng.hpp"

namespace {

using namespace ura;
using namespace ura::bound;

double projection_decoder_error(int m, int n, double snr, Complex h, int trials, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ComplexSignal> book(static_cast<std::size_t>(m), ComplexSignal(static_cast<std::size_t>(n)));
  ComplexSignal y(static_cast<std::size_t>(n));
  int errors = 0;
  for (int t = 0; t < trials; ++t) {
    for (auto& c : book)
      for (auto& v : c) v = draw_cn(rng, snr);
    for (int i = 0; i < n; ++i) y[i] = h * book[0][i] + draw_cn(rng);
    int best = 0;
    double best_score = -1.0;
    for (int w = 0; w < m; ++w) {
      Complex inner{0, 0};
      double energy = 0.0;
      for (int i = 0; i < n; ++i) {
        inner += std::conj(book[w][i]) * y[i];
        energy += std::norm(book[w][i]);
      }
      const double score = std::norm(inner) / energy;
      if (score > best_score) {
        best_score = score;
        best = w;
      }
    }
    errors += best != 0;
  }
  return static_cast<double>(errors) / trials;
}

TEST(UnionTerm, Limits) {
  EXPECT_EQ(union_term(0.0, 16, 0.3), 0.0);
  EXPECT_EQ(union_term(1.0, 16, 0.0), 1.0);
  EXPECT_EQ(union_term(100.0, 16, 1.0), 0.0);
  EXPECT_NEAR(union_term(2.0, 5, 0.5), 3.0 * std::pow(0.5, 4), 1e-15);
  EXPECT_NEAR(union_term(100.0, 512, 0.3), std::exp(100 * std::log(2.0) + 511 * std::log(0.7)), 1e-20);
}

TEST(PStar, SingleCodewordNeverErrs) {
  Rng rng(1);
  EXPECT_EQ(p_star(0.0, 8, 1.0, {1.0, 0.0}, 100, rng), 0.0);
}

TEST(PStar, ZeroFadingCarriesNoInformation) {
  Rng rng(2);
  EXPECT_GT(p_star(100.0, 8, 1.0, {0.0, 0.0}, 500, rng), 0.99);
}

TEST(PStar, BoundsBruteForceProjectionDecoder) {
  for (auto [m, n] : {std::pair{4, 8}, std::pair{8, 16}}) {
    for (double a : {0.5, 1.0, 2.0}) {
      const int trials = 10000;
      Rng rng(derive_seed(11, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(a * 4)}));
      const double bound = p_star(std::log2(m), n, 1.0, {a, 0.0}, trials, rng);
      const double sim = projection_decoder_error(m, n, 1.0, {a, 0.0}, trials, 99 + m);
      const double sigma = std::sqrt(sim * (1 - sim) / trials + bound * (1 - bound) / trials);
      EXPECT_GE(bound + 2.0 * sigma, sim) << "M=" << m << " n=" << n << " |h|=" << a;
    }
  }
}

TEST(ProjectionKernel, MatchesDirectEstimate) {
  const ProjectionKernel kernel(20.0, 64, 20000, 5);
  for (double gamma : {0.1, 0.3, 1.0}) {
    Rng rng(derive_seed(3, {static_cast<std::uint64_t>(gamma * 10)}));
    const int s = 20000;
    const double direct = p_star(20.0, 64, gamma, {1.0, 0.0}, s, rng);
    EXPECT_NEAR(kernel(gamma), direct, 4.0 * std::sqrt(0.25 / s) + 0.01) << gamma;
  }
}

TEST(ProjectionKernel, MonotoneInGammaAndCodebookSize) {
  const ProjectionKernel small(3.0, 32, 2000, 8);
  const ProjectionKernel large(6.0, 32, 2000, 8);
  double prev = 1.0;
  for (double db = -40.0; db <= 40.0; db += 0.37) {
    const double v = small.at_db(db);
    EXPECT_LE(v, prev + 1e-15);
    EXPECT_LE(v, large.at_db(db) + 1e-15);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(large.at_db(db), 1.0);
    prev = v;
  }
}

TEST(P0Term, Limits) {
  EXPECT_EQ(p0_term(1, 100.0, 512, 30000, 1.0, 1e-12), 0.0);
  EXPECT_LT(p0_term(1, 100.0, 512, 512, 1.0, 1e-3), 1e-300);
  EXPECT_NEAR(p0_term(2, 10.0, 512, 30000, 1.0, 0.5), 1.0 / 1024.0, 1e-15);
  EXPECT_THROW(p0_term(2, 10.0, 512, 30000, 1.0, 1.0), std::invalid_argument);
}

TEST(P0Term, ChiSquareTailMatchesSampling) {
  const int n1 = 64;
  const double ratio = 1.1;  // n P / P' = ratio * n1
  const double analytic = p0_term(1, 200.0, n1, n1, ratio, 1.0);
  std::chi_squared_distribution<double> chi(2.0 * n1);
  Rng rng(17);
  const int draws = 200000;
  int hits = 0;
  for (int i = 0; i < draws; ++i) hits += 0.5 * chi(rng) > ratio * n1;
  const double freq = static_cast<double>(hits) / draws;
  EXPECT_NEAR(freq, analytic, 3.0 * std::sqrt(analytic * (1 - analytic) / draws));
}

BoundQuery small_query() {
  BoundQuery q;
  q.log2_m = 100;
  q.n = 5120;
  q.n1 = 512;
  q.power = 1.5 / 10.0 / 0.9;
  q.pprime = 0.9 * q.power;
  q.ka = 50;
  q.T = 4;
  q.mc_fading = 1000;
  q.mc_noise = 100;
  q.seed = 21;
  return q;
}

TEST(TinSicSlotBound, FloorOnlyWhenKernelVanishes) {
  const BoundQuery q = small_query();
  const double p0 = p0_term(q.ka, q.log2_m, q.n1, q.n, q.power, q.pprime);
  const SlotBound b = tinsic_slot_bound(q, 2 * q.T, [](double) { return 0.0; });
  EXPECT_EQ(b.value, p0 + 0.5);
  EXPECT_EQ(b.ci95, 0.0);
}

TEST(TinSicSlotBound, SingleUserReduction) {
  const BoundQuery q = small_query();
  const ProjectionKernel kernel(q.log2_m, q.n1, 4000, 4);
  const SlotBound b = tinsic_slot_bound(q, 1, kernel);
  const double p0 = p0_term(q.ka, q.log2_m, q.n1, q.n, q.power, q.pprime);

  const double snr = q.pprime * q.power_scale();
  Rng rng(1234);
  const int draws = 600;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int d = 0; d < draws; ++d) {
    const Complex h = draw_cn(rng);
    const double v = p_star(q.log2_m, q.n1, snr, h, 30, rng);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double sd = std::sqrt((sum2 / draws - mean * mean) / draws);
  ASSERT_GT(mean, 0.02);
  EXPECT_NEAR(b.value - p0, mean, 3.0 * std::hypot(sd, b.ci95 / 1.96) + 0.005);
}

TEST(TinSicSlotBound, MonotoneInSlotPower) {
  BoundQuery q = small_query();
  const ProjectionKernel kernel(q.log2_m, q.n1, 500, 4);
  for (int r : {1, 3, 6}) {
    double prev = 1.0;
    for (double scale : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      BoundQuery s = q;
      s.power = q.power * scale;
      s.pprime = q.pprime * scale;
      const double v = tinsic_slot_bound(s, r, kernel).value;
      EXPECT_LE(v, prev + 1e-15) << "r=" << r << " scale=" << scale;
      prev = v;
    }
  }
}

TEST(TinSicSlotBound, HighSnrLeavesOnlyP0) {
  BoundQuery q = small_query();
  q.power = 1e6 / q.power_scale() / 0.9;
  q.pprime = 0.9 * q.power;
  const ProjectionKernel kernel(q.log2_m, q.n1, 500, 4);
  const double p0 = p0_term(q.ka, q.log2_m, q.n1, q.n, q.power, q.pprime);
  for (int r = 1; r <= q.T; ++r) EXPECT_NEAR(tinsic_slot_bound(q, r, kernel).value, p0, 2e-3) << r;
}

TEST(OrderedFadingGains, Reproducible) {
  EXPECT_EQ(ordered_fading_gains(5, 3, 10, 9), ordered_fading_gains(5, 3, 10, 9));
  EXPECT_NE(ordered_fading_gains(5, 3, 10, 9), ordered_fading_gains(5, 3, 10, 10));
}

double binom(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

TEST(AlohaAggregate, TrivialCases) {
  const std::vector<double> zeros(30, 0.0);
  EXPECT_EQ(aloha_aggregate(zeros, 30, 7), 0.0);
  const std::vector<double> one{0.37};
  EXPECT_DOUBLE_EQ(aloha_aggregate(one, 1, 5), 0.37);
  const std::vector<double> three{0.1, 0.2, 0.3};
  EXPECT_NEAR(aloha_aggregate(three, 3, 2), 1.0 - (0.9 * 0.25 + 0.8 * 0.5 + 0.7 * 0.25), 1e-15);
  EXPECT_THROW(aloha_aggregate(three, 4, 2), std::invalid_argument);
}

TEST(AlohaAggregate, MatchesDirectEnumeration) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int ka = 1; ka <= 20; ++ka) {
    for (int v : {1, 2, 3, 7, 58}) {
      std::vector<double> p(static_cast<std::size_t>(ka));
      for (auto& x : p) x = u(rng);
      double ok = 0.0;
      for (int r = 1; r <= ka; ++r)
        ok += (1.0 - p[r - 1]) * binom(ka - 1, r - 1) * std::pow(1.0 / v, r - 1) * std::pow(1.0 - 1.0 / v, ka - r);
      EXPECT_NEAR(aloha_aggregate(p, ka, v), 1.0 - ok, 1e-12) << "Ka=" << ka << " V=" << v;
    }
  }
}

BoundSetup fast_setup() {
  BoundSetup s;
  s.T = 8;
  s.mc_fading = 200;
  s.mc_noise = 300;
  s.seed = 3;
  return s;
}

TEST(Optimizer, CurveMonotoneAndConverged) {
  const std::vector<int> grid{10, 50, 150, 300};
  const auto pts = optimize_ebno(fast_setup(), grid, {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ASSERT_TRUE(pts[i].feasible);
    EXPECT_LE(pts[i].eps_T, 0.1);
    EXPECT_LE(pts[i].last_step_db, 0.05);
    if (i) EXPECT_GE(pts[i].ebno_db, pts[i - 1].ebno_db);
  }
}

TEST(Optimizer, FreeSlotLengthNeverWorse) {
  const std::vector<int> grid{50, 400};
  OptimizeOptions free;
  free.n1_grid = {256, 512, 1024};
  const auto fixed = optimize_ebno(fast_setup(), grid, {});
  const auto best = optimize_ebno(fast_setup(), grid, free);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_LE(best[i].ebno_db, fixed[i].ebno_db + 1e-12);
}

TEST(Optimizer, ReportsInfeasible) {
  BoundSetup s = fast_setup();
  s.eps = 1e-6;
  OptimizeOptions o;
  o.ceiling_ebno_db = 20.0;
  const std::vector<int> grid{100};
  const auto pts = optimize_ebno(s, grid, o);
  EXPECT_FALSE(pts[0].feasible);
  EXPECT_TRUE(std::isnan(pts[0].ebno_db));
  EXPECT_GT(pts[0].eps_T, s.eps);
}

}  // namespace
