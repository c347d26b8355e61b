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

#include "ura/crc.hpp"

#include <stdexcept>

namespace ura::polar {

Crc::Crc(std::uint64_t generator, int degree) : generator_(generator), degree_(degree) {
  if (degree < 1 || degree > 63) throw std::invalid_argument("crc degree must be in [1, 63]");
  mask_ = (std::uint64_t{1} << degree) - 1;
  if ((generator & ~mask_) != 0) throw std::invalid_argument("crc generator wider than its degree");
  generator_ &= mask_;
}

Crc Crc::can_fd_21() { return Crc(0x102899, 21); }

std::uint64_t Crc::remainder(std::span<const std::uint8_t> bits) const {
  std::uint64_t reg = 0;
  for (std::uint8_t b : bits) {
    const std::uint64_t top = ((reg >> (degree_ - 1)) & 1U) ^ (b & 1U);
    reg = (reg << 1) & mask_;
    if (top) reg ^= generator_;
  }
  return reg;
}

Bits crc_append(std::span<const std::uint8_t> payload, const Crc& crc) {
  Bits word(payload.begin(), payload.end());
  const std::uint64_t rem = crc.remainder(payload);
  for (int i = crc.degree() - 1; i >= 0; --i) word.push_back(static_cast<std::uint8_t>((rem >> i) & 1U));
  return word;
}

bool crc_check(std::span<const std::uint8_t> word, const Crc& crc) {
  if (word.size() < static_cast<std::size_t>(crc.degree())) return false;
  return crc.remainder(word) == 0;
}

}  // namespace ura::polar
