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


#include "ura/achievability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "ura/parallel.hpp"

namespace ura::bound {

namespace {

double log_m_minus_one(double log2_m) {
  const double x = log2_m * std::numbers::ln2;
  return log2_m > 60.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

double clip01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double union_term(double log2_m, int n, double g) {
  if (log2_m <= 0.0) return 0.0;
  if (g >= 1.0) return 0.0;
  const double e = log_m_minus_one(log2_m) + (n - 1) * std::log1p(-std::max(g, 0.0));
  return e >= 0.0 ? 1.0 : std::exp(e);
}

double p_star(double log2_m, int n, double snr, Complex h, int mc_noise, Rng& rng) {
  if (n < 2) throw std::invalid_argument("p_star needs n >= 2");
  if (!(snr > 0.0)) throw std::invalid_argument("p_star needs snr > 0");
  if (mc_noise < 1) throw std::invalid_argument("p_star needs mc_noise >= 1");
  if (log2_m <= 0.0) return 0.0;
  ComplexSignal x(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int s = 0; s < mc_noise; ++s) {
    for (auto& v : x) v = draw_cn(rng, snr);
    Complex inner{0.0, 0.0};
    double xx = 0.0;
    double yy = 0.0;
    for (const Complex& xv : x) {
      const Complex y = h * xv + draw_cn(rng);
      inner += std::conj(xv) * y;
      xx += std::norm(xv);
      yy += std::norm(y);
    }
    acc += union_term(log2_m, n, std::norm(inner) / (xx * yy));
  }
  return acc / mc_noise;
}

ProjectionKernel::ProjectionKernel(double log2_m, int n, int samples, std::uint64_t seed)
    : log2_m_(log2_m), n_(n), samples_(samples) {
  if (n < 2) throw std::invalid_argument("kernel needs n >= 2");
  if (samples < 1) throw std::invalid_argument("kernel needs samples >= 1");

  // |P_X Y|^2 = |sqrt(gamma * E) + Z1|^2 with E ~ Gamma(n), Z1 ~ CN(0, 1);
  // the orthogonal noise energy is Gamma(n - 1).
  std::vector<double> energy(static_cast<std::size_t>(samples));
  std::vector<double> z_re(energy.size());
  std::vector<double> z_abs2(energy.size());
  std::vector<double> rest(energy.size());
  for (int s = 0; s < samples; ++s) {
    Rng rng = make_rng(seed, {stream_id(Stream::kKernel), static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s)});
    std::gamma_distribution<double> gn(n, 1.0);
    std::gamma_distribution<double> gn1(n - 1, 1.0);
    const auto i = static_cast<std::size_t>(s);
    energy[i] = gn(rng);
    const Complex z = draw_cn(rng);
    z_re[i] = z.real();
    z_abs2[i] = std::norm(z);
    rest[i] = gn1(rng);
  }

  const auto points = static_cast<std::size_t>(std::lround((kMaxDb - kMinDb) / kStepDb)) + 1;
  table_.assign(points, 1.0);
  parallel_for(points, [&](std::size_t j, int) {
    const double gamma = std::pow(10.0, (kMinDb + kStepDb * static_cast<double>(j)) / 10.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < energy.size(); ++i) {
      const double ge = gamma * energy[i];
      const double a = ge + 2.0 * std::sqrt(ge) * z_re[i] + z_abs2[i];
      acc += union_term(log2_m, n, a / (a + rest[i]));
    }
    table_[j] = acc / samples;
  });
  for (std::size_t j = 1; j < points; ++j) table_[j] = std::min(table_[j], table_[j - 1]);
}

double ProjectionKernel::at_db(double gamma_db) const {
  if (!(gamma_db > kMinDb)) return table_.front();
  if (gamma_db >= kMaxDb) return table_.back();
  const double x = (gamma_db - kMinDb) / kStepDb;
  const auto j = static_cast<std::size_t>(x);
  const double f = x - static_cast<double>(j);
  return table_[j] + f * (table_[j + 1] - table_[j]);
}

double ProjectionKernel::operator()(double gamma) const {
  return gamma > 0.0 ? at_db(10.0 * std::log10(gamma)) : table_.front();
}

double p0_term(int ka, double log2_m, int n1, int n, double power, double pprime) {
  if (!(pprime < power)) throw std::invalid_argument("p0 needs P' < P");
  const double pairs = 0.5 * ka * (ka - 1.0);
  const double collide = pairs > 0.0 ? std::exp(std::log(pairs) - log2_m * std::numbers::ln2) : 0.0;
  double tail = 0.0;
  if (pprime > 0.0) tail = boost::math::gamma_q(static_cast<double>(n1), static_cast<double>(n) * power / pprime);
  return clip01(collide + ka * tail);
}

void BoundQuery::validate() const {
  if (n1 < 2 || n < n1) throw std::invalid_argument("need 2 <= n1 <= n");
  if (!(pprime > 0.0 && pprime < power)) throw std::invalid_argument("need 0 < P' < P");
  if (ka < 1 || T < 1) throw std::invalid_argument("need Ka >= 1 and T >= 1");
  if (mc_fading < 1 || mc_noise < 1) throw std::invalid_argument("Monte-Carlo budgets must be >= 1");
}

std::vector<double> ordered_fading_gains(int r, int T, int draws, std::uint64_t seed) {
  if (r < 1 || T < 1 || draws < 1) throw std::invalid_argument("ordered_fading_gains: bad arguments");
  const auto steps = static_cast<std::size_t>(std::min(r, T));
  std::vector<double> out(steps * static_cast<std::size_t>(draws));
  std::vector<double> g(static_cast<std::size_t>(r));
  for (int d = 0; d < draws; ++d) {
    Rng rng = make_rng(seed, {stream_id(Stream::kBound), static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(d)});
    for (auto& v : g) v = std::norm(draw_cn(rng));
    std::sort(g.begin(), g.end(), std::greater<>());
    double tail = 0.0;
    for (std::size_t j = steps; j < g.size(); ++j) tail += g[j];
    for (std::size_t i = steps; i-- > 0;) {
      out[static_cast<std::size_t>(d) * steps + i] = g[i] / (1.0 + tail);
      tail += g[i];
    }
  }
  return out;
}

SlotBound tinsic_slot_bound(const BoundQuery& q, int r, const KernelFn& pstar) {
  return tinsic_slot_bound(q, r, pstar, p0_term(q.ka, q.log2_m, q.n1, q.n, q.power, q.pprime));
}

SlotBound tinsic_slot_bound(const BoundQuery& q, int r, const KernelFn& pstar, double p0) {
  q.validate();
  if (r < 1) throw std::invalid_argument("collision order must be >= 1");
  const int steps = std::min(r, q.T);
  const std::vector<double> gains = ordered_fading_gains(r, q.T, q.mc_fading, q.seed);
  const double snr = q.pprime * q.power_scale();
  double sum = 0.0;
  double sum2 = 0.0;
  for (int d = 0; d < q.mc_fading; ++d) {
    double v = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double c = gains[static_cast<std::size_t>(d * steps + i)];
      v += static_cast<double>(r - i) / r * pstar(snr * c);
    }
    sum += v;
    sum2 += v * v;
  }
  const double draws = q.mc_fading;
  const double mean = sum / draws;
  const double var = draws > 1 ? std::max(0.0, (sum2 - draws * mean * mean) / (draws - 1.0)) : 0.0;
  const double floor_term = std::max(static_cast<double>(r - q.T) / r, 0.0);
  return {clip01(p0 + floor_term + mean), 1.959963984540054 * std::sqrt(var / draws)};
}

double log_collision_pmf(int r, int ka, int slots) {
  if (r < 1 || r > ka) return -INFINITY;
  if (slots == 1) return r == ka ? 0.0 : -INFINITY;
  const double inv = 1.0 / slots;
  return std::lgamma(ka) - std::lgamma(r) - std::lgamma(ka - r + 1.0) + (r - 1) * std::log(inv) +
         (ka - r) * std::log1p(-inv);
}

double aloha_aggregate(std::span<const double> per_r, int ka, int slots) {
  if (ka < 1 || slots < 1) throw std::invalid_argument("aloha_aggregate needs Ka >= 1 and V >= 1");
  if (per_r.size() < static_cast<std::size_t>(ka)) throw std::invalid_argument("per-r bounds must cover r = 1..Ka");
  // Summing the error mass directly keeps an all-zero input exactly zero.
  double err = 0.0;
  for (int r = 1; r <= ka; ++r) {
    const double p = clip01(per_r[static_cast<std::size_t>(r - 1)]);
    const double lp = log_collision_pmf(r, ka, slots);
    if (p == 0.0 || lp == -INFINITY) continue;
    err += p * std::exp(lp);
  }
  return clip01(err);
}

}  // namespace ura::bound
