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

#include "ura/polar_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ura/list_decoder.hpp"

namespace ura::polar {

void PolarCodeSpec::validate() const {
  if (n1 < 2 || !std::has_single_bit(static_cast<unsigned>(n1)))
    throw std::invalid_argument("n1 must be a power of two >= 2, got " + std::to_string(n1));
  if (k < 1 || crc_length < 0) throw std::invalid_argument("k must be >= 1 and crc length >= 0");
  if (info_length() > n1) throw std::invalid_argument("k + c exceeds n1");
  if (list_size < 1) throw std::invalid_argument("list size must be >= 1");
  if (static_cast<int>(frozen.size()) != n1 - info_length())
    throw std::invalid_argument("frozen set size " + std::to_string(frozen.size()) + " != n1 - (k + c) = " +
                                std::to_string(n1 - info_length()));
  for (std::size_t i = 0; i < frozen.size(); ++i) {
    if (frozen[i] < 0 || frozen[i] >= n1) throw std::invalid_argument("frozen index out of range");
    if (i > 0 && frozen[i] <= frozen[i - 1]) throw std::invalid_argument("frozen set must be sorted and unique");
  }
}

namespace {

Crc make_crc(const PolarCodeSpec& spec) {
  if (spec.crc_length == 0) return Crc(0, 1);  // unused: no CRC stage
  return Crc(spec.crc_poly, spec.crc_length);
}

}  // namespace

PolarCode::PolarCode(PolarCodeSpec spec) : spec_(std::move(spec)), crc_(make_crc(spec_)) {
  spec_.validate();
  log2_n1_ = std::countr_zero(static_cast<unsigned>(spec_.n1));
  frozen_mask_.assign(static_cast<std::size_t>(spec_.n1), 0);
  for (int f : spec_.frozen) frozen_mask_[static_cast<std::size_t>(f)] = 1;
  for (int i = 0; i < spec_.n1; ++i)
    if (!frozen_mask_[static_cast<std::size_t>(i)]) info_positions_.push_back(i);
}

Bits PolarCode::encode_info(std::span<const std::uint8_t> info) const {
  if (static_cast<int>(info.size()) != info_length())
    throw std::invalid_argument("encode: expected " + std::to_string(info_length()) + " info bits");
  Bits u(static_cast<std::size_t>(spec_.n1), 0);
  for (std::size_t j = 0; j < info_positions_.size(); ++j)
    u[static_cast<std::size_t>(info_positions_[j])] = info[j] & 1U;
  polar_transform(u);
  return u;
}

Bits PolarCode::encode_payload(std::span<const std::uint8_t> payload) const {
  if (static_cast<int>(payload.size()) != spec_.k) throw std::invalid_argument("encode: payload length != k");
  if (spec_.crc_length == 0) return encode_info(payload);
  return encode_info(crc_append(payload, crc_));
}

void polar_transform(std::span<std::uint8_t> bits) {
  const std::size_t n = bits.size();
  for (std::size_t half = 1; half < n; half <<= 1)
    for (std::size_t block = 0; block < n; block += 2 * half)
      for (std::size_t i = block; i < block + half; ++i) bits[i] ^= bits[i + half];
}

std::vector<double> bpsk_modulate(std::span<const std::uint8_t> coded_bits, double slot_power) {
  const double amp = std::sqrt(slot_power);
  std::vector<double> out(coded_bits.size());
  for (std::size_t i = 0; i < coded_bits.size(); ++i) out[i] = coded_bits[i] ? -amp : amp;
  return out;
}

Codeword polar_encode(std::span<const std::uint8_t> info, const PolarCode& code, double slot_power) {
  Codeword cw;
  cw.coded_bits = code.encode_info(info);
  cw.bpsk = bpsk_modulate(cw.coded_bits, slot_power);
  return cw;
}

std::optional<Bits> scl_decode(std::span<const double> llrs, const PolarCode& code) {
  ListDecoder decoder(code, code.spec().list_size);
  return decoder.decode(llrs);
}

}  // namespace ura::polar
