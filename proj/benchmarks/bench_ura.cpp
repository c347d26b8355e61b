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


#include <benchmark/benchmark.h>

#include <cmath>

#include "ura/achievability.hpp"
#include "ura/fading_mac.hpp"
#include "ura/list_decoder.hpp"
#include "ura/polar_code.hpp"
#include "ura/rng.hpp"
#include "ura/tin_sic.hpp"

namespace {

using namespace ura;

const polar::PolarCode& code() {
  static const polar::PolarCode c = [] {
    polar::PolarCodeSpec spec;
    spec.frozen = polar::construct_frozen_set(512, 121, polar::ConstructionChannel{}, 2000, 1);
    return polar::PolarCode(spec);
  }();
  return c;
}

double slot_power(double ebno_db) { return 100.0 * std::pow(10.0, ebno_db / 10.0) / 512.0; }

void BM_SclDecode(benchmark::State& state) {
  const int list = static_cast<int>(state.range(0));
  polar::ListDecoder dec(code(), list);
  Rng rng(1);
  const auto x = polar::bpsk_modulate(code().encode_payload(random_bits(100, rng)), 1.0);
  std::normal_distribution<double> noise(0.0, 0.8);
  std::vector<double> llr(512);
  for (std::size_t t = 0; t < llr.size(); ++t) llr[t] = 2.0 * (x[t] + noise(rng)) / 0.64;
  for (auto _ : state) benchmark::DoNotOptimize(dec.decode(llr));
}
BENCHMARK(BM_SclDecode)->Arg(1)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_EmCluster(benchmark::State& state) {
  const mac::SlotRealization real = mac::draw_slot_realization(static_cast<int>(state.range(0)), 100, 512, 2, 0, 0);
  const double p = slot_power(20.0);
  const ComplexSignal y = mac::simulate_slot(real, code(), p);
  for (auto _ : state) benchmark::DoNotOptimize(sic::em_cluster(y, p));
}
BENCHMARK(BM_EmCluster)->Arg(1)->Arg(14)->Unit(benchmark::kMicrosecond);

void BM_TinSic(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const mac::SlotRealization real = mac::draw_slot_realization(r, 100, 512, 3, 0, 0);
  const double p = slot_power(25.0);
  const ComplexSignal y = mac::simulate_slot(real, code(), p);
  polar::ListDecoder dec(code(), 16);
  for (auto _ : state) benchmark::DoNotOptimize(sic::tinsic_decode(y, code(), p, 14, dec));
}
BENCHMARK(BM_TinSic)->Arg(1)->Arg(4)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_SicSubtract(benchmark::State& state) {
  Rng rng(4);
  std::vector<std::vector<double>> book;
  for (int i = 0; i < state.range(0); ++i) book.push_back(polar::bpsk_modulate(random_bits(512, rng), 1.0));
  ComplexSignal y(512);
  for (auto& v : y) v = draw_cn(rng);
  for (auto _ : state) benchmark::DoNotOptimize(sic::sic_subtract(y, book));
}
BENCHMARK(BM_SicSubtract)->Arg(1)->Arg(14)->Unit(benchmark::kMicrosecond);

void BM_KernelTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bound::ProjectionKernel(100.0, 512, static_cast<int>(state.range(0)), 5));
}
BENCHMARK(BM_KernelTable)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_BoundEpsT(benchmark::State& state) {
  bound::BoundSetup setup;
  setup.mc_fading = 1000;
  setup.mc_noise = 500;
  bound::OptimizeOptions opts;
  bound::EbnoOptimizer opt(setup, opts);
  const int ka = static_cast<int>(state.range(0));
  opt.prepare(ka);
  const double power = std::pow(10.0, 0.9) * 100.0 / 30000.0;
  for (auto _ : state) benchmark::DoNotOptimize(opt.eps_t(ka, 512, power, 0.999));
}
BENCHMARK(BM_BoundEpsT)->Arg(100)->Arg(700)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
