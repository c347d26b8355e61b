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

#include <filesystem>
#include <string>

#include "ura/polar_code.hpp"

namespace ura::polar {

/// Optional provenance of a constructed code, stored alongside the spec.
struct CodeDesign {
  int collision_order = 0;
  double design_ebno_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// {"n1":512,"k":100,"c":21,"poly_hex":"0x102899","frozen":[...],"list_size":64,"design":{...}}
std::string code_to_json(const PolarCodeSpec& spec, const CodeDesign* design = nullptr);
PolarCodeSpec code_from_json(const std::string& text);

void save_code(const std::filesystem::path& path, const PolarCodeSpec& spec, const CodeDesign* design = nullptr);
PolarCodeSpec load_code(const std::filesystem::path& path);

}  // namespace ura::polar
