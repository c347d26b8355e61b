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
#include <span>
#include <vector>

#include "ura/polar_code.hpp"
#include "ura/rng.hpp"
#include "ura/types.hpp"

namespace ura::mac {

/// Frame geometry and load. Power is the per-frame average power per channel
/// use; all other powers are derived from it.
struct SystemConfig {
  int n = 30000;          // frame length
  int n1 = 512;           // slot length
  int ka = 100;           // active users
  std::int64_t k_tot = 0; // population size, metadata only
  int k = 100;            // payload bits, M = 2^k
  double power = 0.0;     // P
  int T = 14;             // max resolvable collision order
  double eps = 0.1;       // target PUPE

  /// V = floor(n / n1). Channel uses past V * n1 stay idle.
  int slot_count() const { return n / n1; }
  /// Per-slot symbol power n * P / n1 (= V * P when n1 divides n), so each
  /// user's codeword energy is exactly n * P.
  double slot_power() const { return static_cast<double>(n) * power / n1; }
  void validate() const;
};

double ebno_from_power(double power, int n, int k);
double power_from_ebno(double ebno_db, int n, int k);

struct SlotRealization {
  std::vector<Bits> messages;     // r payloads
  std::vector<Complex> fadings;   // r i.i.d. CN(0, 1)
  ComplexSignal noise;            // n1 i.i.d. CN(0, 1)

  int collision_order() const { return static_cast<int>(messages.size()); }
};

/// Draws r payloads, fadings and slot noise from independent streams keyed
/// by (seed, frame, slot).
SlotRealization draw_slot_realization(int r, int k, int n1, std::uint64_t seed, std::uint64_t frame,
                                      std::uint64_t slot);

/// Y = sum_i H_i X(W_i) + Z with BPSK codewords at `slot_power`.
ComplexSignal simulate_slot(const SlotRealization& real, const polar::PolarCode& code, double slot_power);

struct SlotAssignment {
  std::vector<int> slot_of_user;
  std::vector<int> occupancy;  // r_v per slot, sums to ka
};

SlotAssignment assign_slots(int ka, int slots, Rng& rng);

/// Receiver-side slot decoder: sees the received slot only.
using SlotDecoder = std::function<std::vector<Bits>(const ComplexSignal&)>;
/// Instrumentation hook, called before each slot is decoded.
using SlotObserver = std::function<void(int slot, const SlotRealization&)>;

struct FrameOutcome {
  std::vector<std::uint8_t> success;     // per active user
  std::vector<Bits> decoded;             // L(Y), concatenated over slots
  std::vector<int> occupancy;            // users per slot
  std::vector<int> collision_histogram;  // [r] -> number of slots with r users

  int errors() const;
  double pupe() const;
};

/// One frame: Ka uniform messages, uniform slot choice, independent fading
/// per (slot, user), slot-by-slot decoding. User j succeeds iff its message
/// is in L(Y) and no other active user drew the same message.
FrameOutcome simulate_frame(const SystemConfig& cfg, const polar::PolarCode& code, const SlotDecoder& decoder,
                            std::uint64_t seed, std::uint64_t frame, const SlotObserver& observer = {});

}  // namespace ura::mac
