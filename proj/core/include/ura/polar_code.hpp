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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ura/crc.hpp"
#include "ura/rng.hpp"
#include "ura/types.hpp"

namespace ura::polar {

/// Parameters of the common slot codebook: an (n1, k + c) polar code whose
/// information word is a k-bit payload followed by a c-bit CRC.
struct PolarCodeSpec {
  int n1 = 512;
  int k = 100;
  int crc_length = 21;
  std::uint64_t crc_poly = 0x102899;
  std::vector<int> frozen;  // sorted ascending
  int list_size = 64;

  int info_length() const { return k + crc_length; }
  double rate() const { return static_cast<double>(info_length()) / n1; }

  /// Throws std::invalid_argument if any structural invariant is broken.
  void validate() const;
};

struct Codeword {
  Bits coded_bits;
  std::vector<double> bpsk;  // sqrt(P_slot) * (1 - 2 * coded_bits[i])
};

/// Immutable, shareable view of a validated PolarCodeSpec with the derived
/// lookup tables the encoder and decoders need.
class PolarCode {
 public:
  explicit PolarCode(PolarCodeSpec spec);

  const PolarCodeSpec& spec() const { return spec_; }
  const Crc& crc() const { return crc_; }
  int n1() const { return spec_.n1; }
  int log2_n1() const { return log2_n1_; }
  int k() const { return spec_.k; }
  int info_length() const { return spec_.info_length(); }
  std::span<const int> info_positions() const { return info_positions_; }
  bool is_frozen(int index) const { return frozen_mask_[static_cast<std::size_t>(index)] != 0; }

  /// Places k + c info bits on the unfrozen positions and applies the
  /// polar transform. Returns the n1 coded bits.
  Bits encode_info(std::span<const std::uint8_t> info) const;

  /// Payload -> CRC -> polar transform.
  Bits encode_payload(std::span<const std::uint8_t> payload) const;

 private:
  PolarCodeSpec spec_;
  Crc crc_;
  int log2_n1_ = 0;
  std::vector<int> info_positions_;
  std::vector<std::uint8_t> frozen_mask_;
};

/// In-place x = u * F^{(x)m}, F = [[1, 0], [1, 1]], natural (non bit-reversed) order.
void polar_transform(std::span<std::uint8_t> bits);

/// BPSK map at symbol power `slot_power`: bit 0 -> +sqrt(P), bit 1 -> -sqrt(P).
std::vector<double> bpsk_modulate(std::span<const std::uint8_t> coded_bits, double slot_power);

Codeword polar_encode(std::span<const std::uint8_t> info, const PolarCode& code, double slot_power);

/// CRC-aided SCL decoding with the spec's list size. Returns the k-bit
/// payload of the best CRC-passing path, or nullopt when none passes.
std::optional<Bits> scl_decode(std::span<const double> llrs, const PolarCode& code);

/// Channel model the frozen set is designed for.
struct ConstructionChannel {
  enum class Kind { kRayleighTin, kBec };
  Kind kind = Kind::kRayleighTin;
  /// kRayleighTin: single-user Rayleigh channel with interference of
  /// `interferers` equal-power users treated as noise. Design point is the
  /// frame-level Eb/N0 = n1 * P_slot / k.
  int collision_order = 14;
  double design_ebno_db = 15.0;
  int payload_bits = 100;
  /// kBec: erasure probability.
  double erasure = 0.5;

  double slot_power(int n1) const;
  double noise_plus_interference(int n1) const;
};

/// Genie-aided SC error counts per synthetic channel, `trials` Monte-Carlo
/// blocks. Deterministic in (channel, trials, seed) regardless of threading.
std::vector<std::uint64_t> genie_error_counts(int n1, const ConstructionChannel& channel, std::uint64_t trials,
                                              std::uint64_t seed);

/// Frozen set = complement of the `info_length` most reliable indices
/// (fewest genie errors; ties go to the smaller index). Sorted ascending.
std::vector<int> frozen_from_counts(std::span<const std::uint64_t> error_counts, int info_length);

/// Monte-Carlo construction. Requires trials >= 1000.
std::vector<int> construct_frozen_set(int n1, int info_length, const ConstructionChannel& channel,
                                      std::uint64_t trials, std::uint64_t seed);

}  // namespace ura::polar
