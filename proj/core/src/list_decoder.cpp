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

#include "ura/list_decoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace ura::polar {

namespace {

constexpr double kLlrClamp = 1e12;

inline double check_node(double a, double b) {
  const double mag = std::min(std::abs(a), std::abs(b));
  return (std::signbit(a) != std::signbit(b)) ? -mag : mag;
}

// -log P(bit | llr) up to a common constant.
inline double path_penalty(double llr, std::uint8_t bit) {
  const double x = bit ? -llr : llr;
  return std::max(0.0, -x) + std::log1p(std::exp(-std::abs(x)));
}

bool fork_less(const auto& a, const auto& b) {
  if (a.metric != b.metric) return a.metric < b.metric;
  if (a.path != b.path) return a.path < b.path;
  return a.bit < b.bit;
}

}  // namespace

ListDecoder::ListDecoder(const PolarCode& code, int list_size)
    : code_(code), list_size_(list_size), n_(code.n1()), m_(code.log2_n1()) {
  if (list_size < 1) throw std::invalid_argument("list size must be >= 1");
  const auto L = static_cast<std::size_t>(list_size);
  channel_.resize(static_cast<std::size_t>(n_));
  llr_pool_.resize(static_cast<std::size_t>(m_ + 1));
  bit_pool_.resize(static_cast<std::size_t>(m_ + 1));
  ref_count_.assign(static_cast<std::size_t>(m_ + 1), std::vector<int>(L, 0));
  path_to_array_.assign(static_cast<std::size_t>(m_ + 1), std::vector<int>(L, -1));
  free_arrays_.resize(static_cast<std::size_t>(m_ + 1));
  for (int layer = 1; layer <= m_; ++layer) {
    const std::size_t size = std::size_t{1} << (m_ - layer);
    llr_pool_[static_cast<std::size_t>(layer)].assign(L * size, 0.0);
    bit_pool_[static_cast<std::size_t>(layer)].assign(L * 2 * size, 0);
  }
  active_.assign(L, 0);
  metric_.assign(L, 0.0);
  info_bits_.assign(L * static_cast<std::size_t>(code.info_length()), 0);
  forks_.reserve(2 * L);
  keep_.assign(2 * L, 0);
  fork_metric_.assign(2 * L, 0.0);
}

double* ListDecoder::llr_data(int layer, int array) {
  const std::size_t size = std::size_t{1} << (m_ - layer);
  return llr_pool_[static_cast<std::size_t>(layer)].data() + static_cast<std::size_t>(array) * size;
}

std::uint8_t* ListDecoder::bit_data(int layer, int array) {
  const std::size_t size = std::size_t{1} << (m_ - layer);
  return bit_pool_[static_cast<std::size_t>(layer)].data() + static_cast<std::size_t>(array) * 2 * size;
}

const double* ListDecoder::llr_read(int layer, int path) const {
  if (layer == 0) return channel_.data();
  const std::size_t size = std::size_t{1} << (m_ - layer);
  const int array = path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(path)];
  return llr_pool_[static_cast<std::size_t>(layer)].data() + static_cast<std::size_t>(array) * size;
}

void ListDecoder::reset(std::span<const double> llrs) {
  if (static_cast<int>(llrs.size()) != n_) throw std::invalid_argument("decoder: llr length != n1");
  for (std::size_t i = 0; i < llrs.size(); ++i) {
    const double v = llrs[i];
    if (std::isnan(v)) throw std::invalid_argument("decoder: NaN llr");
    channel_[i] = std::clamp(v, -kLlrClamp, kLlrClamp);
  }
  const int L = list_size_;
  free_paths_.clear();
  for (int l = L - 1; l >= 0; --l) free_paths_.push_back(l);
  std::fill(active_.begin(), active_.end(), 0);
  for (int layer = 1; layer <= m_; ++layer) {
    auto& fa = free_arrays_[static_cast<std::size_t>(layer)];
    fa.clear();
    for (int s = L - 1; s >= 0; --s) fa.push_back(s);
    std::fill(ref_count_[static_cast<std::size_t>(layer)].begin(), ref_count_[static_cast<std::size_t>(layer)].end(), 0);
  }
}

int ListDecoder::assign_initial_path() {
  const int path = free_paths_.back();
  free_paths_.pop_back();
  active_[static_cast<std::size_t>(path)] = 1;
  metric_[static_cast<std::size_t>(path)] = 0.0;
  for (int layer = 1; layer <= m_; ++layer) {
    auto& fa = free_arrays_[static_cast<std::size_t>(layer)];
    const int s = fa.back();
    fa.pop_back();
    path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(path)] = s;
    ref_count_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(s)] = 1;
  }
  return path;
}

int ListDecoder::clone_path(int path) {
  const int twin = free_paths_.back();
  free_paths_.pop_back();
  active_[static_cast<std::size_t>(twin)] = 1;
  metric_[static_cast<std::size_t>(twin)] = metric_[static_cast<std::size_t>(path)];
  for (int layer = 1; layer <= m_; ++layer) {
    const int s = path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(path)];
    path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(twin)] = s;
    ++ref_count_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(s)];
  }
  const auto K = static_cast<std::size_t>(code_.info_length());
  std::memcpy(info_bits_.data() + static_cast<std::size_t>(twin) * K,
              info_bits_.data() + static_cast<std::size_t>(path) * K, K);
  return twin;
}

void ListDecoder::kill_path(int path) {
  active_[static_cast<std::size_t>(path)] = 0;
  free_paths_.push_back(path);
  for (int layer = 1; layer <= m_; ++layer) {
    const int s = path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(path)];
    if (--ref_count_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(s)] == 0)
      free_arrays_[static_cast<std::size_t>(layer)].push_back(s);
  }
}

// Copy-on-write. Only the partial-sum half is copied: every LLR write
// overwrites the whole array, and stale LLRs of a detached array are never
// read before being recomputed.
int ListDecoder::writable(int layer, int path) {
  auto& mapping = path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(path)];
  auto& refs = ref_count_[static_cast<std::size_t>(layer)];
  if (refs[static_cast<std::size_t>(mapping)] == 1) return mapping;
  auto& fa = free_arrays_[static_cast<std::size_t>(layer)];
  const int fresh = fa.back();
  fa.pop_back();
  const std::size_t size = std::size_t{1} << (m_ - layer);
  std::memcpy(bit_data(layer, fresh), bit_data(layer, mapping), 2 * size);
  --refs[static_cast<std::size_t>(mapping)];
  refs[static_cast<std::size_t>(fresh)] = 1;
  mapping = fresh;
  return fresh;
}

void ListDecoder::calc_llr(int layer, int phase) {
  if (layer == 0) return;
  if ((phase & 1) == 0) calc_llr(layer - 1, phase >> 1);
  const int size = 1 << (m_ - layer);
  for (int l = 0; l < list_size_; ++l) {
    if (!active_[static_cast<std::size_t>(l)]) continue;
    const double* src = llr_read(layer - 1, l);
    const int array = writable(layer, l);
    double* dst = llr_data(layer, array);
    if ((phase & 1) == 0) {
      for (int b = 0; b < size; ++b) dst[b] = check_node(src[b], src[b + size]);
    } else {
      const std::uint8_t* left = bit_data(layer, array);  // column 0
      for (int b = 0; b < size; ++b) dst[b] = src[b + size] + (left[b] ? -src[b] : src[b]);
    }
  }
}

void ListDecoder::update_bits(int layer, int phase) {
  const int psi = phase >> 1;
  if (layer - 1 >= 1) {
    const int size = 1 << (m_ - layer);
    const int col = psi & 1;
    for (int l = 0; l < list_size_; ++l) {
      if (!active_[static_cast<std::size_t>(l)]) continue;
      const int src_array = path_to_array_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(l)];
      const std::uint8_t* src = bit_data(layer, src_array);
      const int dst_array = writable(layer - 1, l);
      std::uint8_t* dst = bit_data(layer - 1, dst_array) + static_cast<std::size_t>(col) * 2 * size;
      for (int b = 0; b < size; ++b) {
        dst[b] = src[b] ^ src[b + size];
        dst[b + size] = src[b + size];
      }
    }
  }
  if ((psi & 1) == 1 && layer - 1 >= 1) update_bits(layer - 1, psi);
}

void ListDecoder::continue_frozen(int phase) {
  const int col = phase & 1;
  for (int l = 0; l < list_size_; ++l) {
    if (!active_[static_cast<std::size_t>(l)]) continue;
    const int array = writable(m_, l);
    const double llr = llr_data(m_, array)[0];
    metric_[static_cast<std::size_t>(l)] += path_penalty(llr, 0);
    bit_data(m_, array)[col] = 0;
  }
}

void ListDecoder::continue_unfrozen(int phase, int info_index) {
  const int col = phase & 1;
  forks_.clear();
  for (int l = 0; l < list_size_; ++l) {
    if (!active_[static_cast<std::size_t>(l)]) continue;
    const double llr = llr_read(m_, l)[0];
    const double pm = metric_[static_cast<std::size_t>(l)];
    forks_.push_back({pm + path_penalty(llr, 0), l, 0});
    forks_.push_back({pm + path_penalty(llr, 1), l, 1});
  }
  const std::size_t keep = std::min(forks_.size(), static_cast<std::size_t>(list_size_));
  if (keep < forks_.size()) {
    std::nth_element(forks_.begin(), forks_.begin() + static_cast<std::ptrdiff_t>(keep), forks_.end(),
                     [](const Fork& a, const Fork& b) { return fork_less(a, b); });
  }
  std::fill(keep_.begin(), keep_.end(), 0);
  for (std::size_t i = 0; i < keep; ++i)
    keep_[static_cast<std::size_t>(forks_[i].path) * 2 + forks_[i].bit] = 1;

  // Fork metrics are captured before any path is killed or cloned.
  auto& fm = fork_metric_;
  for (const Fork& f : forks_) fm[static_cast<std::size_t>(f.path) * 2 + f.bit] = f.metric;

  for (int l = 0; l < list_size_; ++l) {
    if (!active_[static_cast<std::size_t>(l)]) continue;
    if (!keep_[static_cast<std::size_t>(l) * 2] && !keep_[static_cast<std::size_t>(l) * 2 + 1]) kill_path(l);
  }
  const auto K = static_cast<std::size_t>(code_.info_length());
  auto set_bit = [&](int path, std::uint8_t bit) {
    const int array = writable(m_, path);
    bit_data(m_, array)[col] = bit;
    info_bits_[static_cast<std::size_t>(path) * K + static_cast<std::size_t>(info_index)] = bit;
  };
  for (int l = 0; l < list_size_; ++l) {
    const bool k0 = keep_[static_cast<std::size_t>(l) * 2];
    const bool k1 = keep_[static_cast<std::size_t>(l) * 2 + 1];
    if (!k0 && !k1) continue;
    if (k0 && k1) {
      const int twin = clone_path(l);
      metric_[static_cast<std::size_t>(l)] = fm[static_cast<std::size_t>(l) * 2];
      metric_[static_cast<std::size_t>(twin)] = fm[static_cast<std::size_t>(l) * 2 + 1];
      set_bit(l, 0);
      set_bit(twin, 1);
    } else {
      const std::uint8_t bit = k1 ? 1 : 0;
      metric_[static_cast<std::size_t>(l)] = fm[static_cast<std::size_t>(l) * 2 + bit];
      set_bit(l, bit);
    }
  }
}

std::vector<ListDecoder::Candidate> ListDecoder::decode_list(std::span<const double> llrs) {
  reset(llrs);
  assign_initial_path();
  int info_index = 0;
  for (int phase = 0; phase < n_; ++phase) {
    calc_llr(m_, phase);
    if (code_.is_frozen(phase)) {
      continue_frozen(phase);
    } else {
      continue_unfrozen(phase, info_index++);
    }
    if (phase & 1) update_bits(m_, phase);
  }

  std::vector<int> order;
  for (int l = 0; l < list_size_; ++l)
    if (active_[static_cast<std::size_t>(l)]) order.push_back(l);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = metric_[static_cast<std::size_t>(a)];
    const double mb = metric_[static_cast<std::size_t>(b)];
    return ma != mb ? ma < mb : a < b;
  });
  const auto K = static_cast<std::size_t>(code_.info_length());
  std::vector<Candidate> out;
  out.reserve(order.size());
  for (int l : order) {
    const auto* begin = info_bits_.data() + static_cast<std::size_t>(l) * K;
    out.push_back({Bits(begin, begin + K), metric_[static_cast<std::size_t>(l)]});
  }
  return out;
}

std::optional<Bits> ListDecoder::decode(std::span<const double> llrs) {
  const auto list = decode_list(llrs);
  const auto k = static_cast<std::size_t>(code_.k());
  for (const Candidate& c : list) {
    if (code_.spec().crc_length == 0 || crc_check(c.info, code_.crc())) {
      return Bits(c.info.begin(), c.info.begin() + static_cast<std::ptrdiff_t>(k));
    }
  }
  return std::nullopt;
}

}  // namespace ura::polar
