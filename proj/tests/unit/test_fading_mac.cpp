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
#include <numeric>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

#include "ura/achievability.hpp"
#include "ura/fading_mac.hpp"
#include "ura/polar_code.hpp"

namespace ura::mac {
namespace {

polar::PolarCodeSpec short_spec() {
  polar::PolarCodeSpec spec;
  spec.n1 = 128;
  spec.list_size = 1;
  for (int i = 0; i < 7; ++i) spec.frozen.push_back(i);
  return spec;
}

TEST(SystemConfig, SlotGeometry) {
  SystemConfig cfg;
  cfg.power = 0.01;
  EXPECT_EQ(cfg.slot_count(), 58);
  EXPECT_DOUBLE_EQ(cfg.slot_power() * cfg.n1, cfg.n * cfg.power);
  cfg.n = 2048;
  EXPECT_EQ(cfg.slot_count(), 4);
  EXPECT_DOUBLE_EQ(cfg.slot_power(), 4 * cfg.power);
  cfg.eps = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Ebno, Conversions) {
  EXPECT_NEAR(ebno_from_power(1.0 / 300.0, 30000, 100), 0.0, 1e-12);
  EXPECT_NEAR(ebno_from_power(std::pow(10.0, -1.4771), 30000, 100), 10.0, 1e-3);
  for (double p : {1e-4, 0.02, 3.7}) {
    const double back = power_from_ebno(ebno_from_power(p, 30000, 100), 30000, 100);
    EXPECT_NEAR(back / p, 1.0, 1e-12);
  }
  EXPECT_THROW(ebno_from_power(0.0, 10, 1), std::invalid_argument);
}

TEST(SimulateSlot, EmptySlotIsNoise) {
  const polar::PolarCode code(short_spec());
  const SlotRealization real = draw_slot_realization(0, 100, 128, 4, 0, 0);
  EXPECT_EQ(simulate_slot(real, code, 5.0), real.noise);
}

TEST(SimulateSlot, UnitFadingWithoutNoiseIsTheCodeword) {
  const polar::PolarCode code(short_spec());
  SlotRealization real = draw_slot_realization(1, 100, 128, 4, 0, 0);
  real.fadings[0] = 1.0;
  std::fill(real.noise.begin(), real.noise.end(), Complex{0.0, 0.0});
  const ComplexSignal y = simulate_slot(real, code, 2.0);
  const auto x = polar::bpsk_modulate(code.encode_payload(real.messages[0]), 2.0);
  for (std::size_t t = 0; t < y.size(); ++t) EXPECT_EQ(y[t], Complex(x[t], 0.0));
}

TEST(SimulateSlot, ThreeUsersFormEightClusters) {
  const polar::PolarCode code(short_spec());
  const double p = 3.0;
  const SlotRealization real = draw_slot_realization(3, 100, 128, 9, 1, 2);
  const ComplexSignal y = simulate_slot(real, code, p);
  std::vector<Complex> centres;
  for (int s = 0; s < 8; ++s) {
    Complex c{0, 0};
    for (int i = 0; i < 3; ++i) c += ((s >> i) & 1 ? -1.0 : 1.0) * std::sqrt(p) * real.fadings[i];
    centres.push_back(c);
  }
  std::set<int> hit;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const Complex clean = y[t] - real.noise[t];
    int best = 0;
    for (int s = 1; s < 8; ++s)
      if (std::abs(clean - centres[s]) < std::abs(clean - centres[best])) best = s;
    EXPECT_LT(std::abs(clean - centres[best]), 1e-12);
    hit.insert(best);
  }
  EXPECT_EQ(hit.size(), 8u);
}

TEST(SimulateSlot, NoiseHasUnitVariance) {
  const int slots = 200;
  double sum = 0.0;
  std::size_t count = 0;
  for (int s = 0; s < slots; ++s) {
    for (const Complex& z : draw_slot_realization(0, 100, 512, 3, 0, static_cast<std::uint64_t>(s)).noise) {
      sum += std::norm(z);
      ++count;
    }
  }
  // |z|^2 ~ Exp(1): standard deviation 1 per sample.
  EXPECT_NEAR(sum / count, 1.0, 3.0 / std::sqrt(static_cast<double>(count)));
}

TEST(SimulateSlot, FadingPowerIsExponential) {
  std::vector<double> g;
  for (int f = 0; f < 1000; ++f)
    for (const Complex& h : draw_slot_realization(100, 1, 2, 8, static_cast<std::uint64_t>(f), 0).fadings)
      g.push_back(std::norm(h));
  std::sort(g.begin(), g.end());
  const double n = static_cast<double>(g.size());
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double cdf = 1.0 - std::exp(-g[i]);
    d = std::max({d, cdf - i / n, (i + 1) / n - cdf});
  }
  // Kolmogorov critical value for p = 0.01.
  EXPECT_LT(d * std::sqrt(n), 1.628);
}

TEST(AssignSlots, DegenerateCases) {
  Rng rng(1);
  const SlotAssignment one_slot = assign_slots(7, 1, rng);
  EXPECT_EQ(one_slot.occupancy, std::vector<int>{7});
  const SlotAssignment one_user = assign_slots(1, 9, rng);
  EXPECT_EQ(std::count(one_user.occupancy.begin(), one_user.occupancy.end(), 1), 1);
  EXPECT_EQ(std::accumulate(one_user.occupancy.begin(), one_user.occupancy.end(), 0), 1);
}

TEST(AssignSlots, TaggedUserSeesBinomialCollisions) {
  const int ka = 10;
  const int v = 5;
  const int frames = 100000;
  Rng rng(77);
  std::vector<int> counts(ka + 1, 0);
  for (int f = 0; f < frames; ++f) {
    const SlotAssignment a = assign_slots(ka, v, rng);
    EXPECT_EQ(std::accumulate(a.occupancy.begin(), a.occupancy.end(), 0), ka);
    ++counts[a.occupancy[a.slot_of_user[0]]];
  }
  // Bins r = 1..6 and a pooled tail r >= 7.
  double chi2 = 0.0;
  double tail_expected = frames;
  int tail_observed = frames;
  int bins = 0;
  for (int r = 1; r <= 6; ++r) {
    const double e = frames * std::exp(bound::log_collision_pmf(r, ka, v));
    chi2 += (counts[r] - e) * (counts[r] - e) / e;
    tail_expected -= e;
    tail_observed -= counts[r];
    ++bins;
  }
  chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) / tail_expected;
  ++bins;
  const double p_value = boost::math::gamma_q((bins - 1) / 2.0, chi2 / 2.0);
  EXPECT_GT(p_value, 0.01) << "chi2=" << chi2;
}

TEST(SimulateFrame, PerfectAndEmptyDecoders) {
  const polar::PolarCode code(short_spec());
  SystemConfig cfg;
  cfg.n = 128 * 4;
  cfg.n1 = 128;
  cfg.ka = 1;
  cfg.power = 1.0;
  SlotRealization seen;
  auto observer = [&](int, const SlotRealization& r) { seen = r; };
  auto perfect = [&](const ComplexSignal&) { return seen.messages; };
  auto empty = [](const ComplexSignal&) { return std::vector<Bits>{}; };
  EXPECT_EQ(simulate_frame(cfg, code, perfect, 1, 0, observer).pupe(), 0.0);
  cfg.ka = 6;
  EXPECT_EQ(simulate_frame(cfg, code, perfect, 1, 0, observer).pupe(), 0.0);
  EXPECT_EQ(simulate_frame(cfg, code, empty, 1, 0).pupe(), 1.0);
}

TEST(SimulateFrame, Reproducible) {
  const polar::PolarCode code(short_spec());
  SystemConfig cfg;
  cfg.n = 128 * 6;
  cfg.n1 = 128;
  cfg.ka = 9;
  cfg.power = 1.0;
  std::vector<std::vector<Complex>> a;
  std::vector<std::vector<Complex>> b;
  auto rec = [](std::vector<std::vector<Complex>>& out) {
    return [&out](const ComplexSignal& y) {
      out.push_back(y);
      return std::vector<Bits>{};
    };
  };
  const FrameOutcome fa = simulate_frame(cfg, code, rec(a), 5, 3);
  const FrameOutcome fb = simulate_frame(cfg, code, rec(b), 5, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(fa.occupancy, fb.occupancy);
}

// Genie slot decoders whose per-slot error law is known in closed form.
double genie_pupe(int T, bool partial, int frames) {
  const polar::PolarCode code(short_spec());
  SystemConfig cfg;
  cfg.n = 128 * 5;
  cfg.n1 = 128;
  cfg.ka = 20;
  cfg.T = T;
  cfg.power = 1.0;
  SlotRealization seen;
  auto observer = [&](int, const SlotRealization& r) { seen = r; };
  auto decoder = [&](const ComplexSignal&) {
    const int r = seen.collision_order();
    if (r <= T) return seen.messages;
    if (!partial) return std::vector<Bits>{};
    return std::vector<Bits>(seen.messages.begin(), seen.messages.begin() + T);
  };
  double errors = 0.0;
  for (int f = 0; f < frames; ++f) errors += simulate_frame(cfg, code, decoder, 12, static_cast<std::uint64_t>(f), observer).errors();
  return errors / (frames * 20.0);
}

TEST(SimulateFrame, GenieDecoderMatchesAggregation) {
  const int frames = 20000;
  const int T = 4;
  std::vector<double> all_or_nothing(20);
  std::vector<double> partial(20);
  for (int r = 1; r <= 20; ++r) {
    all_or_nothing[r - 1] = r > T ? 1.0 : 0.0;
    partial[r - 1] = r > T ? static_cast<double>(r - T) / r : 0.0;
  }
  for (bool part : {false, true}) {
    const double expected = bound::aloha_aggregate(part ? partial : all_or_nothing, 20, 5);
    const double sim = genie_pupe(T, part, frames);
    // Users in a frame are dependent; use a loose per-frame variance bound.
    EXPECT_NEAR(sim, expected, 4.0 * std::sqrt(0.25 / frames)) << "partial=" << part;
  }
}

TEST(SimulateFrame, DuplicateMessagesAreErrorsForBoth) {
  polar::PolarCodeSpec spec;
  spec.n1 = 8;
  spec.k = 2;
  spec.crc_length = 2;
  spec.crc_poly = 0x3;
  spec.list_size = 1;
  spec.frozen = {0, 1, 2, 4};
  const polar::PolarCode code(spec);
  SystemConfig cfg;
  cfg.n = 8;
  cfg.n1 = 8;
  cfg.k = 2;
  cfg.ka = 3;
  cfg.power = 1.0;
  SlotRealization seen;
  auto observer = [&](int, const SlotRealization& r) { seen = r; };
  auto decoder = [&](const ComplexSignal&) { return seen.messages; };
  const int frames = 40000;
  double errors = 0.0;
  for (int f = 0; f < frames; ++f) errors += simulate_frame(cfg, code, decoder, 2, static_cast<std::uint64_t>(f), observer).errors();
  const double expected = 1.0 - 0.75 * 0.75;
  EXPECT_NEAR(errors / (3.0 * frames), expected, 4.0 * std::sqrt(0.25 / frames));
}

}  // namespace
}  // namespace ura::mac
