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

#include "ura/code_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ura::polar {

using nlohmann::json;

std::string code_to_json(const PolarCodeSpec& spec, const CodeDesign* design) {
  std::ostringstream hex;
  hex << "0x" << std::hex << spec.crc_poly;
  json j;
  j["n1"] = spec.n1;
  j["k"] = spec.k;
  j["c"] = spec.crc_length;
  j["poly_hex"] = hex.str();
  j["frozen"] = spec.frozen;
  j["list_size"] = spec.list_size;
  if (design) {
    j["design"] = {{"collision_order", design->collision_order},
                   {"design_ebno_db", design->design_ebno_db},
                   {"trials", design->trials},
                   {"seed", design->seed}};
  }
  return j.dump();
}

PolarCodeSpec code_from_json(const std::string& text) {
  PolarCodeSpec spec;
  try {
    const json j = json::parse(text);
    spec.n1 = j.at("n1").get<int>();
    spec.k = j.at("k").get<int>();
    spec.crc_length = j.at("c").get<int>();
    spec.crc_poly = std::stoull(j.at("poly_hex").get<std::string>(), nullptr, 16);
    spec.frozen = j.at("frozen").get<std::vector<int>>();
    spec.list_size = j.value("list_size", 64);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed code json: ") + e.what());
  }
  spec.validate();
  return spec;
}

void save_code(const std::filesystem::path& path, const PolarCodeSpec& spec, const CodeDesign* design) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << code_to_json(spec, design) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PolarCodeSpec load_code(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open code file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return code_from_json(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace ura::polar
