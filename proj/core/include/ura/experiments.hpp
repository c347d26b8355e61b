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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ura/fading_mac.hpp"
#include "ura/polar_code.hpp"

namespace ura::harness {

struct ResultTable {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> wall_time_s;  // per row, kept out of the CSV

  std::size_t column(std::string_view name) const;
  double at(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)); }
  void add_row(std::vector<double> row, double seconds);
};

enum class ExperimentKind { kSlotPupe, kSchemeCurve, kBoundCurve };
enum class Scale { kDesk, kPaper };

std::string_view kind_name(ExperimentKind kind);
Scale parse_scale(std::string_view text);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSlotPupe;
  mac::SystemConfig system;  // n, n1, k, T, eps; power is searched or swept
  std::uint64_t seed = 1;
  int trials = 200;  // slots per point, or frames per scheme-curve evaluation
  int list_size = 64;

  // Slot sweep.
  std::vector<int> r_grid;
  std::vector<double> ebno_grid_db;

  // Scheme and bound curves.
  std::vector<int> ka_grid;
  double start_ebno_db = 10.0;
  double step_db = 10.0 * 0.30102999566398120;  // doubling of P
  int bisection_iterations = 6;
  double floor_ebno_db = -5.0;
  double ceiling_ebno_db = 40.0;

  // Bound curve.
  std::vector<int> T_grid{14};
  std::vector<int> n1_grid{128, 256, 512, 1024, 2048};
  bool include_fixed_n1 = true;
  int mc_fading = 2000;
  int mc_noise = 1000;

  std::filesystem::path output;

  void validate() const;
};

/// Per (r, Eb/N0) grid point: slot PUPE with CI, false-alarm rate (share of
/// slots whose list holds a message nobody sent) and mean number of decodes.
/// Eb/N0 is frame-level n P / k, so the slot power is k Eb/N0 / n1.
ResultTable run_slot_pupe_sweep(const ExperimentSpec& spec, const polar::PolarCode& code);

/// Frame PUPE at a fixed Eb/N0 for every Ka in the grid (frame-sim).
ResultTable run_frame_sim(const ExperimentSpec& spec, const polar::PolarCode& code);

/// Smallest simulated Eb/N0 with frame PUPE <= eps, per Ka.
ResultTable run_scheme_curve(const ExperimentSpec& spec, const polar::PolarCode& code);

/// Achievability Eb/N0 per Ka for each T, optimal over n1 and at the fixed n1.
ResultTable run_bound_curve(const ExperimentSpec& spec);

struct FigurePreset {
  std::vector<ExperimentSpec> experiments;
  polar::ConstructionChannel construction;
  std::uint64_t construction_trials = 10000;
};

FigurePreset fig2_preset(Scale scale, std::uint64_t seed);
FigurePreset fig3_preset(Scale scale, std::uint64_t seed);

/// Versioned JSON run configuration:
/// {"schema_version":1,"n":30000,"n1":512,"ka":100,"k":100,"T":14,"eps":0.1,
///  "ebno_db":[10,12],"list_size":64,"k_tot":0}
/// "ebno_db" may be a number or an array; "list_size" is optional.
struct RunConfig {
  mac::SystemConfig system;
  std::vector<double> ebno_db;
  int list_size = 0;  // 0: use the code's list size
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);

/// True when any row of a curve table failed to meet its target.
bool has_infeasible(const ResultTable& table);

}  // namespace ura::harness
