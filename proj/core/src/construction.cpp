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
#include <numeric>
#include <stdexcept>
#include <string>

#include "ura/parallel.hpp"
#include "ura/polar_code.hpp"

namespace ura::polar {

double ConstructionChannel::slot_power(int n1) const {
  return payload_bits * std::pow(10.0, design_ebno_db / 10.0) / n1;
}

double ConstructionChannel::noise_plus_interference(int n1) const {
  return 1.0 + (collision_order - 1) * slot_power(n1);
}

namespace {

constexpr double kSure = 1e100;

inline double check_node(double a, double b) {
  const double mag = std::min(std::abs(a), std::abs(b));
  return (std::signbit(a) != std::signbit(b)) ? -mag : mag;
}

// Genie-aided SC: the decision at every leaf is scored against the true bit,
// then the true bit is fed forward. Scratch buffers are indexed by depth.
class GenieSc {
 public:
  explicit GenieSc(int n) {
    for (int size = n; size >= 1; size >>= 1) {
      llr_.emplace_back(static_cast<std::size_t>(size));
      bits_.emplace_back(static_cast<std::size_t>(size));
    }
  }

  void run(const std::vector<double>& channel, const Bits& u, std::vector<std::uint64_t>& errors) {
    std::copy(channel.begin(), channel.end(), llr_[0].begin());
    descend(0, 0, u, errors);
  }

 private:
  void descend(std::size_t depth, int offset, const Bits& u, std::vector<std::uint64_t>& errors) {
    auto& llr = llr_[depth];
    auto& out = bits_[depth];
    const std::size_t n = llr.size();
    if (n == 1) {
      const std::uint8_t truth = u[static_cast<std::size_t>(offset)];
      const bool wrong = llr[0] == 0.0 || (llr[0] < 0.0) != (truth == 1);
      if (wrong) ++errors[static_cast<std::size_t>(offset)];
      out[0] = truth;
      return;
    }
    const std::size_t half = n / 2;
    auto& child = llr_[depth + 1];
    auto& child_bits = bits_[depth + 1];
    for (std::size_t i = 0; i < half; ++i) child[i] = check_node(llr[i], llr[i + half]);
    descend(depth + 1, offset, u, errors);
    Bits left(child_bits.begin(), child_bits.end());
    for (std::size_t i = 0; i < half; ++i) child[i] = llr[i + half] + (left[i] ? -llr[i] : llr[i]);
    descend(depth + 1, offset + static_cast<int>(half), u, errors);
    for (std::size_t i = 0; i < half; ++i) {
      out[i] = left[i] ^ child_bits[i];
      out[i + half] = child_bits[i];
    }
  }

  std::vector<std::vector<double>> llr_;
  std::vector<Bits> bits_;
};

void channel_llrs(const ConstructionChannel& channel, const Bits& coded, Rng& rng, std::vector<double>& llr) {
  const std::size_t n = coded.size();
  if (channel.kind == ConstructionChannel::Kind::kBec) {
    std::bernoulli_distribution erased(channel.erasure);
    for (std::size_t i = 0; i < n; ++i) llr[i] = erased(rng) ? 0.0 : (coded[i] ? -kSure : kSure);
    return;
  }
  const int n1 = static_cast<int>(n);
  const double power = channel.slot_power(n1);
  const double amp = std::sqrt(power);
  const double noise_var = channel.noise_plus_interference(n1);
  const Complex h = draw_cn(rng, 1.0);
  const double scale = 4.0 * amp / noise_var;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coded[i] ? -amp : amp;
    const Complex y = h * x + draw_cn(rng, noise_var);
    llr[i] = scale * (std::conj(h) * y).real();
  }
}

}  // namespace

std::vector<std::uint64_t> genie_error_counts(int n1, const ConstructionChannel& channel, std::uint64_t trials,
                                              std::uint64_t seed) {
  if (n1 < 2 || (n1 & (n1 - 1)) != 0) throw std::invalid_argument("n1 must be a power of two");
  const int workers = worker_count();
  const std::size_t chunks = static_cast<std::size_t>(std::max(1, workers)) * 4;
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(static_cast<std::size_t>(n1), 0));
  parallel_for(chunks, [&](std::size_t chunk, int) {
    GenieSc sc(n1);
    std::vector<double> llr(static_cast<std::size_t>(n1));
    auto& errors = partial[chunk];
    for (std::uint64_t t = chunk; t < trials; t += chunks) {
      Rng rng = make_rng(seed, {stream_id(Stream::kConstruction), t});
      const Bits u = random_bits(static_cast<std::size_t>(n1), rng);
      Bits x = u;
      polar_transform(x);
      channel_llrs(channel, x, rng, llr);
      sc.run(llr, u, errors);
    }
  });
  std::vector<std::uint64_t> total(static_cast<std::size_t>(n1), 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += p[i];
  return total;
}

std::vector<int> frozen_from_counts(std::span<const std::uint64_t> error_counts, int info_length) {
  const int n1 = static_cast<int>(error_counts.size());
  if (info_length < 0 || info_length > n1) throw std::invalid_argument("info length out of range");
  std::vector<int> order(static_cast<std::size_t>(n1));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return error_counts[static_cast<std::size_t>(a)] < error_counts[static_cast<std::size_t>(b)];
  });
  std::vector<int> frozen(order.begin() + info_length, order.end());
  std::sort(frozen.begin(), frozen.end());
  return frozen;
}

std::vector<int> construct_frozen_set(int n1, int info_length, const ConstructionChannel& channel,
                                      std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1000)
    throw std::invalid_argument("construction needs >= 1000 trials to order subchannels, got " +
                                std::to_string(trials));
  const auto counts = genie_error_counts(n1, channel, trials, seed);
  return frozen_from_counts(counts, info_length);
}

}  // namespace ura::polar
