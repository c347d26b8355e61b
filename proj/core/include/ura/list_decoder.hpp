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
#include <vector>

#include "ura/polar_code.hpp"
#include "ura/types.hpp"

namespace ura::polar {

/// CRC-aided successive-cancellation list decoder (LLR domain, lazy copy of
/// per-layer arrays between paths). One instance owns its workspace and is
/// meant to be reused across calls by a single thread.
///
/// LLR convention: llr = log p(y | bit 0) / p(y | bit 1), bit 0 <-> +sqrt(P).
class ListDecoder {
 public:
  struct Candidate {
    Bits info;      // k + c decoded information bits
    double metric;  // accumulated path metric, lower is better
  };

  ListDecoder(const PolarCode& code, int list_size);

  int list_size() const { return list_size_; }

  /// Surviving list after the last bit, best metric first (ties by path index).
  std::vector<Candidate> decode_list(std::span<const double> llrs);

  /// Best CRC-passing candidate's payload, or nullopt if the CRC-filtered
  /// list is empty.
  std::optional<Bits> decode(std::span<const double> llrs);

 private:
  void reset(std::span<const double> llrs);
  void calc_llr(int layer, int phase);
  void update_bits(int layer, int phase);
  void continue_frozen(int phase);
  void continue_unfrozen(int phase, int info_index);

  int assign_initial_path();
  int clone_path(int path);
  void kill_path(int path);
  int writable(int layer, int path);
  const double* llr_read(int layer, int path) const;
  double* llr_data(int layer, int array);
  std::uint8_t* bit_data(int layer, int array);

  const PolarCode& code_;
  int list_size_;
  int n_;
  int m_;

  std::vector<double> channel_;
  std::vector<std::vector<double>> llr_pool_;          // [layer][array * size + beta]
  std::vector<std::vector<std::uint8_t>> bit_pool_;    // [layer][array * 2 * size + col * size + beta]
  std::vector<std::vector<int>> ref_count_;            // [layer][array]
  std::vector<std::vector<int>> path_to_array_;        // [layer][path]
  std::vector<std::vector<int>> free_arrays_;          // [layer]
  std::vector<int> free_paths_;
  std::vector<std::uint8_t> active_;
  std::vector<double> metric_;
  std::vector<std::uint8_t> info_bits_;  // [path * K + j]

  struct Fork {
    double metric;
    int path;
    std::uint8_t bit;
  };
  std::vector<Fork> forks_;
  std::vector<std::uint8_t> keep_;     // [path * 2 + bit]
  std::vector<double> fork_metric_;   // [path * 2 + bit]
};

}  // namespace ura::polar
