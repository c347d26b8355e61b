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
#include <span>

#include "ura/types.hpp"

namespace ura::polar {

/// Binary CRC computed as plain polynomial long division (zero initial
/// register, no reflection, no output xor). The generator is given in
/// normal form, without the implicit leading x^degree term.
class Crc {
 public:
  Crc(std::uint64_t generator, int degree);

  /// CRC-21/CAN-FD generator x^21 + x^20 + x^13 + x^11 + x^7 + x^4 + x^3 + 1.
  static Crc can_fd_21();

  int degree() const { return degree_; }
  std::uint64_t generator() const { return generator_; }

  /// Remainder of bits(x) * x^degree modulo the generator.
  std::uint64_t remainder(std::span<const std::uint8_t> bits) const;

 private:
  std::uint64_t generator_;
  int degree_;
  std::uint64_t mask_;
};

/// payload || remainder, where the remainder is written MSB first.
Bits crc_append(std::span<const std::uint8_t> payload, const Crc& crc);

/// True iff the word (payload || remainder) is divisible by the generator.
bool crc_check(std::span<const std::uint8_t> word, const Crc& crc);

}  // namespace ura::polar
