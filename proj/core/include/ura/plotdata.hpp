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
#include <string_view>
#include <vector>

#include "ura/experiments.hpp"

namespace ura::harness {

struct PlotSpec {
  std::string title;
  std::string x;  // column names
  std::string y;
  std::string series;  // empty for a single series
  std::string x_label;
  std::string y_label;
  bool y_log = false;
};

struct PlotFiles {
  std::filesystem::path csv;
  std::filesystem::path manifest;
};

std::string to_csv(const ResultTable& table);
ResultTable from_csv(std::string_view text);

void write_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(const std::filesystem::path& path);

std::string plot_manifest(const ResultTable& table, const PlotSpec& plot, const std::string& csv_name);
/// Empty when the manifest text conforms to the ura-plotdata schema.
std::vector<std::string> manifest_errors(const std::string& manifest_text);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json.
PlotFiles emit_plotdata(const ResultTable& table, const PlotSpec& plot, const std::filesystem::path& dir,
                        const std::string& stem);

}  // namespace ura::harness
