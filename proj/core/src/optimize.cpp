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
#include <stdexcept>
#include <utility>

#include "ura/achievability.hpp"
#include "ura/parallel.hpp"

namespace ura::bound {

namespace {

constexpr double kLogPmfFloor = -34.538776394910684;  // log(1e-15)

double power_of(double ebno_db, int n, int k) { return std::pow(10.0, ebno_db / 10.0) * k / n; }
double ebno_of(double power, int n, int k) { return 10.0 * std::log10(static_cast<double>(n) * power / k); }

}  // namespace

struct EbnoOptimizer::Evaluator {
  int n1 = 0;
  int slots = 0;
  double power_scale = 0.0;
  int r_max = 0;
  ProjectionKernel kernel;
  std::vector<std::vector<double>> gains_db;  // [r - 1] -> draws x min(r, T)

  Evaluator(const BoundSetup& s, int n1_)
      : n1(n1_),
        slots(s.n / n1_),
        power_scale(static_cast<double>(s.n) / n1_),
        kernel(s.k, n1_, s.mc_noise, derive_seed(s.seed, {static_cast<std::uint64_t>(n1_)})) {}

  void extend(const BoundSetup& s, int upto) {
    for (int r = r_max + 1; r <= upto; ++r) {
      std::vector<double> g = ordered_fading_gains(r, s.T, s.mc_fading, s.seed);
      for (auto& v : g) v = 10.0 * std::log10(v);
      gains_db.push_back(std::move(g));
    }
    r_max = std::max(r_max, upto);
  }

  // Mean over fading draws of the weighted kernel sum, and the variance of that mean.
  std::pair<double, double> mean_term(int r, int T, int draws, double snr_db) const {
    const int steps = std::min(r, T);
    const auto& g = gains_db[static_cast<std::size_t>(r - 1)];
    double acc = 0.0;
    double acc2 = 0.0;
    for (int d = 0; d < draws; ++d) {
      const double* row = g.data() + static_cast<std::size_t>(d) * steps;
      double v = 0.0;
      for (int i = 0; i < steps; ++i) v += static_cast<double>(r - i) * kernel.at_db(snr_db + row[i]);
      v /= r;
      acc += v;
      acc2 += v * v;
    }
    const double mean = acc / draws;
    const double var = draws > 1 ? std::max(0.0, (acc2 - draws * mean * mean) / (draws - 1.0)) / draws : 0.0;
    return {mean, var};
  }
};

EbnoOptimizer::EbnoOptimizer(BoundSetup setup, OptimizeOptions options)
    : setup_(setup), options_(std::move(options)) {
  if (!(setup_.eps > 0.0 && setup_.eps < 1.0)) throw std::invalid_argument("eps must be in (0, 1)");
  if (setup_.T < 1 || setup_.k < 1 || setup_.n < 2) throw std::invalid_argument("bad bound setup");
  if (setup_.mc_fading < 1 || setup_.mc_noise < 1) throw std::invalid_argument("Monte-Carlo budgets must be >= 1");
  if (options_.pprime_ratios.empty() || options_.n1_grid.empty()) throw std::invalid_argument("empty search grid");
  for (double rho : options_.pprime_ratios)
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("P'/P must be in (0, 1)");
  for (int n1 : options_.n1_grid)
    if (n1 < 2 || n1 > setup_.n) throw std::invalid_argument("slot length out of range");
  if (options_.bisection_iterations < 1) throw std::invalid_argument("need >= 1 bisection iteration");
}

EbnoOptimizer::~EbnoOptimizer() = default;

void EbnoOptimizer::prepare(int max_ka) {
  if (max_ka < 1) throw std::invalid_argument("Ka must be >= 1");
  for (int n1 : options_.n1_grid) {
    auto it = std::find_if(evaluators_.begin(), evaluators_.end(), [&](const auto& e) { return e->n1 == n1; });
    if (it == evaluators_.end()) {
      evaluators_.push_back(std::make_unique<Evaluator>(setup_, n1));
      it = std::prev(evaluators_.end());
    }
    int upto = 1;
    for (int r = 1; r <= max_ka; ++r)
      if (log_collision_pmf(r, max_ka, (*it)->slots) >= kLogPmfFloor) upto = r;
    (*it)->extend(setup_, upto);
  }
}

const EbnoOptimizer::Evaluator& EbnoOptimizer::evaluator(int n1) const {
  for (const auto& e : evaluators_)
    if (e->n1 == n1) return *e;
  throw std::logic_error("slot length not prepared");
}

double EbnoOptimizer::eps_t(int ka, int n1, double power, double pprime_ratio) const {
  return eps_t_ci(ka, n1, power, pprime_ratio).value;
}

SlotBound EbnoOptimizer::eps_t_ci(int ka, int n1, double power, double pprime_ratio) const {
  const Evaluator& ev = evaluator(n1);
  const double p0 = p0_term(ka, setup_.k, n1, setup_.n, power, pprime_ratio * power);
  const double snr_db = 10.0 * std::log10(pprime_ratio * power * ev.power_scale);
  std::vector<double> per_r(static_cast<std::size_t>(ka), 1.0);
  double running = 0.0;
  double var = 0.0;
  for (int r = 1; r <= ka; ++r) {
    double p = 1.0;
    const double lp = log_collision_pmf(r, ka, ev.slots);
    if (r <= ev.r_max && lp >= kLogPmfFloor) {
      const double floor_term = std::max(static_cast<double>(r - setup_.T) / r, 0.0);
      const auto [mean, v] = ev.mean_term(r, setup_.T, setup_.mc_fading, snr_db);
      p = std::min(1.0, p0 + floor_term + mean);
      var += std::exp(2.0 * lp) * v;
    }
    // Raising a bound keeps it valid; the true error is non-decreasing in r.
    running = std::max(running, p);
    per_r[static_cast<std::size_t>(r - 1)] = running;
  }
  return {aloha_aggregate(per_r, ka, ev.slots), 1.959963984540054 * std::sqrt(var)};
}

OptimumPoint EbnoOptimizer::optimize_n1(int ka, const Evaluator& ev) const {
  const int n = setup_.n;
  const int k = setup_.k;
  OptimumPoint best;
  best.ka = ka;
  best.n1 = ev.n1;
  for (double rho : options_.pprime_ratios) {
    auto feasible = [&](double p) { return eps_t(ka, ev.n1, p, rho) <= setup_.eps; };
    double lo = 0.0;
    double hi = 0.0;
    const double start = power_of(options_.start_ebno_db, n, k);
    if (feasible(start)) {
      hi = start;
      lo = start / 2.0;
      while (feasible(lo)) {
        hi = lo;
        if (ebno_of(lo, n, k) <= options_.floor_ebno_db) break;
        lo /= 2.0;
      }
      if (hi == lo) {
        const SlotBound e = eps_t_ci(ka, ev.n1, hi, rho);
        const OptimumPoint cand{ka, ev.n1, rho, ebno_of(hi, n, k), e.value, e.ci95, 0.0, true};
        if (!best.feasible || cand.ebno_db < best.ebno_db) best = cand;
        continue;
      }
    } else {
      lo = start;
      hi = start * 2.0;
      bool found = false;
      while (ebno_of(hi, n, k) <= options_.ceiling_ebno_db) {
        if (feasible(hi)) {
          found = true;
          break;
        }
        lo = hi;
        hi *= 2.0;
      }
      if (!found) continue;
    }
    double prev_hi = hi;
    double step_db = 0.0;
    for (int it = 0; it < options_.bisection_iterations; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (feasible(mid)) {
        step_db = ebno_of(prev_hi, n, k) - ebno_of(mid, n, k);
        prev_hi = hi = mid;
      } else {
        lo = mid;
      }
    }
    step_db = std::max(step_db, 10.0 * std::log10(hi / lo));
    const SlotBound e = eps_t_ci(ka, ev.n1, hi, rho);
    const OptimumPoint cand{ka, ev.n1, rho, ebno_of(hi, n, k), e.value, e.ci95, step_db, true};
    if (!best.feasible || cand.ebno_db < best.ebno_db) best = cand;
  }
  if (!best.feasible) {
    best.pprime_ratio = options_.pprime_ratios.back();
    best.ebno_db = NAN;
    const SlotBound e = eps_t_ci(ka, ev.n1, power_of(options_.ceiling_ebno_db, n, k), best.pprime_ratio);
    best.eps_T = e.value;
    best.eps_T_ci95 = e.ci95;
  }
  return best;
}

OptimumPoint EbnoOptimizer::optimize(int ka) const {
  OptimumPoint best;
  best.ka = ka;
  bool first = true;
  for (int n1 : options_.n1_grid) {
    const OptimumPoint p = optimize_n1(ka, evaluator(n1));
    if (first || (p.feasible && (!best.feasible || p.ebno_db < best.ebno_db))) best = p;
    first = false;
  }
  return best;
}

std::vector<OptimumPoint> optimize_ebno(const BoundSetup& setup, std::span<const int> ka_grid,
                                        const OptimizeOptions& options) {
  if (ka_grid.empty()) throw std::invalid_argument("empty Ka grid");
  EbnoOptimizer opt(setup, options);
  opt.prepare(*std::max_element(ka_grid.begin(), ka_grid.end()));
  std::vector<OptimumPoint> out(ka_grid.size());
  parallel_for(ka_grid.size(), [&](std::size_t i, int) { out[i] = opt.optimize(ka_grid[i]); });
  return out;
}

}  // namespace ura::bound
