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

#include <complex>
#include <cstdint>
#include <vector>

namespace ura {

using Complex = std::complex<double>;

/// Complex baseband samples of one slot (length n1) or one frame (length n).
using ComplexSignal = std::vector<Complex>;

/// Bit vector, one bit per byte, values in {0, 1}.
using Bits = std::vector<std::uint8_t>;

}  // namespace ura
