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

#include "ura/fading_mac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ura::mac {

void SystemConfig::validate() const {
  if (n1 < 1 || n < n1) throw std::invalid_argument("need 1 <= n1 <= n");
  if (ka < 1) throw std::invalid_argument("Ka must be >= 1");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must be in (0, 1)");
}

double ebno_from_power(double power, int n, int k) {
  if (!(power > 0.0)) throw std::invalid_argument("power must be > 0");
  return 10.0 * std::log10(static_cast<double>(n) * power / k);
}

double power_from_ebno(double ebno_db, int n, int k) {
  return std::pow(10.0, ebno_db / 10.0) * k / static_cast<double>(n);
}

namespace {

ComplexSignal draw_noise(std::uint64_t seed, std::uint64_t frame, std::uint64_t slot, int n1) {
  Rng rng = make_rng(seed, {stream_id(Stream::kNoise), frame, slot});
  ComplexSignal z(static_cast<std::size_t>(n1));
  for (auto& v : z) v = draw_cn(rng);
  return z;
}

Complex draw_fading(std::uint64_t seed, std::uint64_t frame, std::uint64_t slot, std::uint64_t user) {
  Rng rng = make_rng(seed, {stream_id(Stream::kFading), frame, slot, user});
  return draw_cn(rng);
}

}  // namespace

SlotRealization draw_slot_realization(int r, int k, int n1, std::uint64_t seed, std::uint64_t frame,
                                      std::uint64_t slot) {
  if (r < 0) throw std::invalid_argument("collision order must be >= 0");
  SlotRealization real;
  Rng msg_rng = make_rng(seed, {stream_id(Stream::kMessages), frame, slot});
  for (int i = 0; i < r; ++i) {
    real.messages.push_back(random_bits(static_cast<std::size_t>(k), msg_rng));
    real.fadings.push_back(draw_fading(seed, frame, slot, static_cast<std::uint64_t>(i)));
  }
  real.noise = draw_noise(seed, frame, slot, n1);
  return real;
}

ComplexSignal simulate_slot(const SlotRealization& real, const polar::PolarCode& code, double slot_power) {
  if (real.messages.size() != real.fadings.size()) throw std::invalid_argument("messages / fadings size mismatch");
  if (static_cast<int>(real.noise.size()) != code.n1()) throw std::invalid_argument("noise length != n1");
  ComplexSignal y = real.noise;
  const double amp = std::sqrt(slot_power);
  for (std::size_t i = 0; i < real.messages.size(); ++i) {
    const Bits coded = code.encode_payload(real.messages[i]);
    const Complex h = real.fadings[i] * amp;
    for (std::size_t t = 0; t < y.size(); ++t) y[t] += coded[t] ? -h : h;
  }
  return y;
}

SlotAssignment assign_slots(int ka, int slots, Rng& rng) {
  if (slots < 1) throw std::invalid_argument("slot count must be >= 1");
  if (ka < 0) throw std::invalid_argument("Ka must be >= 0");
  SlotAssignment a;
  a.slot_of_user.resize(static_cast<std::size_t>(ka));
  a.occupancy.assign(static_cast<std::size_t>(slots), 0);
  std::uniform_int_distribution<int> pick(0, slots - 1);
  for (auto& s : a.slot_of_user) {
    s = pick(rng);
    ++a.occupancy[static_cast<std::size_t>(s)];
  }
  return a;
}

int FrameOutcome::errors() const {
  return static_cast<int>(std::count(success.begin(), success.end(), std::uint8_t{0}));
}

double FrameOutcome::pupe() const {
  return success.empty() ? 0.0 : static_cast<double>(errors()) / static_cast<double>(success.size());
}

FrameOutcome simulate_frame(const SystemConfig& cfg, const polar::PolarCode& code, const SlotDecoder& decoder,
                            std::uint64_t seed, std::uint64_t frame, const SlotObserver& observer) {
  cfg.validate();
  if (code.n1() != cfg.n1) throw std::invalid_argument("code blocklength != slot length");
  if (code.k() != cfg.k) throw std::invalid_argument("code payload != k");
  const int slots = cfg.slot_count();
  const auto ka = static_cast<std::size_t>(cfg.ka);

  std::vector<Bits> messages(ka);
  for (std::size_t j = 0; j < ka; ++j) {
    Rng rng = make_rng(seed, {stream_id(Stream::kMessages), frame, j});
    messages[j] = random_bits(static_cast<std::size_t>(cfg.k), rng);
  }
  Rng slot_rng = make_rng(seed, {stream_id(Stream::kSlotChoice), frame});
  const SlotAssignment assignment = assign_slots(cfg.ka, slots, slot_rng);

  std::vector<std::vector<std::size_t>> users_in_slot(static_cast<std::size_t>(slots));
  for (std::size_t j = 0; j < ka; ++j) users_in_slot[static_cast<std::size_t>(assignment.slot_of_user[j])].push_back(j);

  FrameOutcome out;
  out.occupancy = assignment.occupancy;
  const int max_r = *std::max_element(out.occupancy.begin(), out.occupancy.end());
  out.collision_histogram.assign(static_cast<std::size_t>(max_r + 1), 0);
  for (int r : out.occupancy) ++out.collision_histogram[static_cast<std::size_t>(r)];

  const double slot_power = cfg.slot_power();
  for (int v = 0; v < slots; ++v) {
    const auto& users = users_in_slot[static_cast<std::size_t>(v)];
    SlotRealization real;
    for (std::size_t i = 0; i < users.size(); ++i) {
      real.messages.push_back(messages[users[i]]);
      real.fadings.push_back(draw_fading(seed, frame, static_cast<std::uint64_t>(v), users[i]));
    }
    real.noise = draw_noise(seed, frame, static_cast<std::uint64_t>(v), cfg.n1);
    if (observer) observer(v, real);
    const ComplexSignal y = simulate_slot(real, code, slot_power);
    for (Bits& m : decoder(y)) out.decoded.push_back(std::move(m));
  }

  std::vector<Bits> sorted_decoded = out.decoded;
  std::sort(sorted_decoded.begin(), sorted_decoded.end());
  std::vector<Bits> sorted_sent = messages;
  std::sort(sorted_sent.begin(), sorted_sent.end());
  out.success.assign(ka, 0);
  for (std::size_t j = 0; j < ka; ++j) {
    const auto [lo, hi] = std::equal_range(sorted_sent.begin(), sorted_sent.end(), messages[j]);
    const bool duplicate = (hi - lo) > 1;
    const bool listed = std::binary_search(sorted_decoded.begin(), sorted_decoded.end(), messages[j]);
    out.success[j] = static_cast<std::uint8_t>(listed && !duplicate);
  }
  return out;
}

}  // namespace ura::mac
