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

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ura {

/// Bernoulli proportion with a normal-approximation 95% interval.
struct Proportion {
  std::uint64_t events = 0;
  std::uint64_t trials = 0;

  double mean() const { return trials ? static_cast<double>(events) / static_cast<double>(trials) : 0.0; }
  double ci95() const {
    if (trials == 0) return 1.0;
    const double p = mean();
    return 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  }
  Proportion& operator+=(const Proportion& o) {
    events += o.events;
    trials += o.trials;
    return *this;
  }
};

/// Streaming mean / variance (Welford).
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double stderr_mean() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }
  double ci95() const { return 1.959963984540054 * stderr_mean(); }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace ura
