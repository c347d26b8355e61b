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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "ura/types.hpp"

namespace ura {

using Rng = std::mt19937_64;

/// Independent random streams drawn from the same (seed, counters) tuple.
enum class Stream : std::uint64_t {
  kMessages = 1,
  kSlotChoice = 2,
  kFading = 3,
  kNoise = 4,
  kConstruction = 5,
  kBound = 6,
  kKernel = 7,
  kAux = 8,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based seed derivation: any (seed, counters...) tuple maps to its
/// own engine state, so a single trial can be replayed in isolation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t c : counters) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
  return Rng(derive_seed(seed, counters));
}

inline std::uint64_t stream_id(Stream s) { return static_cast<std::uint64_t>(s); }

/// CN(0, variance): independent real and imaginary parts, each N(0, variance/2).
inline Complex draw_cn(Rng& rng, double variance = 1.0) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  const double re = gauss(rng);
  const double im = gauss(rng);
  return {re, im};
}

inline Bits random_bits(std::size_t count, Rng& rng) {
  Bits bits(count);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 64 == 0) word = rng();
    bits[i] = static_cast<std::uint8_t>(word & 1U);
    word >>= 1;
  }
  return bits;
}

}  // namespace ura
