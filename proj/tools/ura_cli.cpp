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


#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ura/code_io.hpp"
#include "ura/experiments.hpp"
#include "ura/plotdata.hpp"
#include "ura/polar_code.hpp"

namespace fs = std::filesystem;
using namespace ura;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFault = 1;
constexpr int kExitInfeasible = 2;

std::vector<int> parse_int_grid(const std::string& text) {
  std::vector<int> out;
  if (text.find(':') != std::string::npos) {
    int a = 0, b = 0, s = 1;
    if (std::sscanf(text.c_str(), "%d:%d:%d", &a, &b, &s) != 3 || s <= 0 || b < a)
      throw std::invalid_argument("grid must look like from:to:step, got '" + text + "'");
    for (int v = a; v <= b; v += s) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

std::vector<double> parse_real_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a = 0, b = 0, s = 1;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &s) != 3 || !(s > 0) || b < a)
      throw std::invalid_argument("grid must look like from:to:step, got '" + text + "'");
    for (int i = 0; a + i * s <= b + 1e-9; ++i) out.push_back(a + i * s);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

std::uint64_t default_crc_poly(int c) {
  switch (c) {
    case 11: return 0x385;     // CRC-11/FlexRay
    case 16: return 0x1021;    // CRC-16/CCITT
    case 21: return 0x102899;  // CRC-21/CAN-FD
    default: throw std::invalid_argument("no default polynomial for a " + std::to_string(c) + "-bit CRC; pass --crc-poly");
  }
}

polar::PolarCodeSpec build_code(int n1, int k, int c, std::uint64_t poly, int list, const polar::ConstructionChannel& ch,
                                std::uint64_t trials, std::uint64_t seed) {
  polar::PolarCodeSpec spec;
  spec.n1 = n1;
  spec.k = k;
  spec.crc_length = c;
  spec.crc_poly = poly;
  spec.list_size = list;
  spec.frozen = polar::construct_frozen_set(n1, k + c, ch, trials, seed);
  spec.validate();
  return spec;
}

void report(const harness::ResultTable& t, const fs::path& out) {
  harness::write_csv(t, out);
  std::cout << "wrote " << out.string() << " (" << t.rows.size() << " rows)\n";
}

harness::ResultTable filter_rows(const harness::ResultTable& t, const std::string& col, double value) {
  harness::ResultTable out;
  out.kind = t.kind;
  out.columns = t.columns;
  const std::size_t c = t.column(col);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i][c] == value) out.add_row(t.rows[i], t.wall_time_s[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unsourced random access over the fading MAC: polar TIN-SIC simulation and achievability bounds"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "Monte-Carlo frozen-set construction");
  int c_n1 = 512, c_k = 100, c_crc = 21, c_list = 64, c_order = 14;
  double c_snr = 15.0;
  std::string c_poly;
  std::uint64_t c_trials = 10000, c_seed = 1;
  std::string c_out;
  construct->add_option("--n1", c_n1, "blocklength (power of two)");
  construct->add_option("--k", c_k, "payload bits");
  construct->add_option("--crc", c_crc, "CRC length in bits");
  construct->add_option("--crc-poly", c_poly, "CRC generator without the leading term, hex");
  construct->add_option("--list", c_list, "SCL list size stored with the code");
  construct->add_option("--design-snr-db", c_snr, "design Eb/N0 in dB (n1 * P_slot / k)");
  construct->add_option("--collision-order", c_order, "collision order the code is designed for");
  construct->add_option("--trials", c_trials, "genie-aided SC trials (>= 1000)");
  construct->add_option("--seed", c_seed);
  construct->add_option("--out", c_out, "output JSON")->required();

  // slot-sim
  auto* slot = app.add_subcommand("slot-sim", "Slot PUPE of the TIN-SIC decoder versus collision order and Eb/N0");
  std::string s_code, s_r = "14", s_ebno = "30", s_out, s_plot;
  int s_trials = 200, s_T = 14, s_list = 0;
  std::uint64_t s_seed = 1;
  slot->add_option("--code", s_code)->required();
  slot->add_option("--r", s_r, "collision orders, e.g. 14 or 1,9,14");
  slot->add_option("--ebno-db", s_ebno, "frame-level Eb/N0 grid, e.g. 30 or 7:31:3");
  slot->add_option("--trials", s_trials);
  slot->add_option("--T", s_T, "maximum SIC depth");
  slot->add_option("--list", s_list, "list size override");
  slot->add_option("--seed", s_seed);
  slot->add_option("--out", s_out)->required();
  slot->add_option("--plot-dir", s_plot, "also emit plot data here");

  // frame-sim
  auto* frame = app.add_subcommand("frame-sim", "Frame PUPE with T-fold ALOHA and TIN-SIC slot decoding");
  std::string f_cfg, f_code, f_out;
  int f_trials = 50;
  std::uint64_t f_seed = 1;
  frame->add_option("--config", f_cfg)->required();
  frame->add_option("--code", f_code)->required();
  frame->add_option("--trials", f_trials, "frames per Eb/N0 value");
  frame->add_option("--seed", f_seed);
  frame->add_option("--out", f_out)->required();

  // bound
  auto* bnd = app.add_subcommand("bound", "Achievability bound: smallest Eb/N0 per Ka");
  int b_k = 100, b_n = 30000, b_n1 = 512, b_T = 14, b_fading = 2000, b_noise = 200;
  double b_eps = 0.1;
  std::string b_grid = "50:750:50", b_out, b_plot;
  std::uint64_t b_seed = 1;
  bool b_opt = false;
  bnd->add_option("--k", b_k);
  bnd->add_option("--n", b_n);
  bnd->add_option("--n1", b_n1);
  bnd->add_option("--T", b_T);
  bnd->add_option("--ka-grid", b_grid);
  bnd->add_option("--eps", b_eps);
  bnd->add_option("--mc-fading", b_fading);
  bnd->add_option("--mc-noise", b_noise);
  bnd->add_option("--seed", b_seed);
  bnd->add_flag("--optimize-n1", b_opt, "minimize over n1 in {128, ..., 2048}");
  bnd->add_option("--out", b_out)->required();
  bnd->add_option("--plot-dir", b_plot);

  // optimize
  auto* opt = app.add_subcommand("optimize", "Simulated scheme curve: smallest Eb/N0 with frame PUPE <= eps per Ka");
  std::string o_cfg, o_code, o_grid, o_out;
  int o_trials = 50, o_iters = 5;
  double o_start = 10.0;
  std::uint64_t o_seed = 1;
  opt->add_option("--config", o_cfg)->required();
  opt->add_option("--code", o_code)->required();
  opt->add_option("--ka-grid", o_grid, "defaults to the config's ka");
  opt->add_option("--trials", o_trials, "frames per evaluation");
  opt->add_option("--iterations", o_iters, "bisection iterations after bracketing");
  opt->add_option("--start-ebno-db", o_start);
  opt->add_option("--seed", o_seed);
  opt->add_option("--out", o_out)->required();

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "Regenerate a figure's data at desk or paper scale");
  std::string r_fig, r_scale = "desk", r_dir = "results", r_code;
  std::uint64_t r_seed = 1;
  repro->add_option("figure", r_fig, "fig2 or fig3")->required()->check(CLI::IsMember({"fig2", "fig3"}));
  repro->add_option("--scale", r_scale)->check(CLI::IsMember({"desk", "paper"}));
  repro->add_option("--out-dir", r_dir);
  repro->add_option("--code", r_code, "reuse a constructed code instead of building one");
  repro->add_option("--seed", r_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFault;
  }

  try {
    if (*construct) {
      polar::ConstructionChannel ch;
      ch.collision_order = c_order;
      ch.design_ebno_db = c_snr;
      ch.payload_bits = c_k;
      const std::uint64_t poly = c_poly.empty() ? default_crc_poly(c_crc) : std::stoull(c_poly, nullptr, 16);
      const auto spec = build_code(c_n1, c_k, c_crc, poly, c_list, ch, c_trials, c_seed);
      const polar::CodeDesign design{c_order, c_snr, c_trials, c_seed};
      polar::save_code(c_out, spec, &design);
      std::cout << "wrote " << c_out << "\n";
      return kExitOk;
    }

    if (*slot) {
      const polar::PolarCode code(polar::load_code(s_code));
      harness::ExperimentSpec spec;
      spec.kind = harness::ExperimentKind::kSlotPupe;
      spec.system.n1 = code.n1();
      spec.system.k = code.k();
      spec.system.T = s_T;
      spec.r_grid = parse_int_grid(s_r);
      spec.ebno_grid_db = parse_real_grid(s_ebno);
      spec.trials = s_trials;
      spec.seed = s_seed;
      spec.list_size = s_list > 0 ? s_list : code.spec().list_size;
      const auto table = harness::run_slot_pupe_sweep(spec, code);
      report(table, s_out);
      if (!s_plot.empty())
        harness::emit_plotdata(table, {"Slot PUPE", "ebno_db", "pupe", "r", "Eb/N0, dB", "PUPE", true}, s_plot, "slot_pupe");
      return kExitOk;
    }

    if (*frame) {
      const harness::RunConfig rc = harness::load_run_config(f_cfg);
      const polar::PolarCode code(polar::load_code(f_code));
      if (rc.ebno_db.empty()) throw std::invalid_argument("config needs 'ebno_db' for frame-sim");
      harness::ExperimentSpec spec;
      spec.system = rc.system;
      spec.ebno_grid_db = rc.ebno_db;
      spec.trials = f_trials;
      spec.seed = f_seed;
      spec.list_size = rc.list_size > 0 ? rc.list_size : code.spec().list_size;
      report(harness::run_frame_sim(spec, code), f_out);
      return kExitOk;
    }

    if (*bnd) {
      harness::ExperimentSpec spec;
      spec.kind = harness::ExperimentKind::kBoundCurve;
      spec.system.k = b_k;
      spec.system.n = b_n;
      spec.system.n1 = b_n1;
      spec.system.eps = b_eps;
      spec.T_grid = {b_T};
      spec.ka_grid = parse_int_grid(b_grid);
      spec.mc_fading = b_fading;
      spec.mc_noise = b_noise;
      spec.seed = b_seed;
      spec.ceiling_ebno_db = 60.0;
      if (b_opt) {
        spec.include_fixed_n1 = false;
      } else {
        spec.n1_grid = {b_n1};
      }
      const auto table = harness::run_bound_curve(spec);
      report(table, b_out);
      if (!b_plot.empty())
        harness::emit_plotdata(table, {"Achievability bound", "ka", "ebno_db", "T", "Ka", "Eb/N0, dB", false}, b_plot, "bound");
      return harness::has_infeasible(table) ? kExitInfeasible : kExitOk;
    }

    if (*opt) {
      const harness::RunConfig rc = harness::load_run_config(o_cfg);
      const polar::PolarCode code(polar::load_code(o_code));
      harness::ExperimentSpec spec;
      spec.kind = harness::ExperimentKind::kSchemeCurve;
      spec.system = rc.system;
      spec.ka_grid = o_grid.empty() ? std::vector<int>{rc.system.ka} : parse_int_grid(o_grid);
      spec.trials = o_trials;
      spec.bisection_iterations = o_iters;
      spec.start_ebno_db = o_start;
      spec.seed = o_seed;
      spec.list_size = rc.list_size > 0 ? rc.list_size : code.spec().list_size;
      const auto table = harness::run_scheme_curve(spec, code);
      report(table, o_out);
      return harness::has_infeasible(table) ? kExitInfeasible : kExitOk;
    }

    if (*repro) {
      const harness::Scale scale = harness::parse_scale(r_scale);
      const fs::path dir(r_dir);
      fs::create_directories(dir);
      const harness::FigurePreset preset = r_fig == "fig2" ? harness::fig2_preset(scale, r_seed) : harness::fig3_preset(scale, r_seed);
      polar::PolarCodeSpec code_spec;
      if (!r_code.empty()) {
        code_spec = polar::load_code(r_code);
      } else {
        code_spec = build_code(512, 100, 21, default_crc_poly(21), 64, preset.construction, preset.construction_trials, r_seed);
        const polar::CodeDesign design{preset.construction.collision_order, preset.construction.design_ebno_db,
                                       preset.construction_trials, r_seed};
        polar::save_code(dir / "code.json", code_spec, &design);
        std::cout << "wrote " << (dir / "code.json").string() << "\n";
      }
      const polar::PolarCode code(code_spec);
      bool infeasible = false;
      for (harness::ExperimentSpec spec : preset.experiments) {
        if (spec.kind == harness::ExperimentKind::kSlotPupe) {
          const auto t = harness::run_slot_pupe_sweep(spec, code);
          const auto f = harness::emit_plotdata(t, {"Slot PUPE versus Eb/N0", "ebno_db", "pupe", "r", "Eb/N0, dB", "PUPE", true}, dir, "fig2_slot_pupe");
          std::cout << "wrote " << f.csv.string() << "\n";
        } else if (spec.kind == harness::ExperimentKind::kSchemeCurve) {
          const auto t = harness::run_scheme_curve(spec, code);
          infeasible |= harness::has_infeasible(t);
          const auto f = harness::emit_plotdata(t, {"Polar TIN-SIC scheme", "ka", "ebno_db", "", "Ka", "Eb/N0, dB", false}, dir, "fig3_scheme");
          std::cout << "wrote " << f.csv.string() << "\n";
        } else {
          const auto t = harness::run_bound_curve(spec);
          infeasible |= harness::has_infeasible(t);
          const auto opt_t = filter_rows(t, "n1_optimized", 1.0);
          const auto fix_t = filter_rows(t, "n1_optimized", 0.0);
          const auto a = harness::emit_plotdata(opt_t, {"Achievability, optimal n1", "ka", "ebno_db", "T", "Ka", "Eb/N0, dB", false}, dir, "fig3_bound_optimal_n1");
          const auto b = harness::emit_plotdata(fix_t, {"Achievability, fixed n1", "ka", "ebno_db", "T", "Ka", "Eb/N0, dB", false}, dir, "fig3_bound_fixed_n1");
          std::cout << "wrote " << a.csv.string() << "\nwrote " << b.csv.string() << "\n";
        }
      }
      return infeasible ? kExitInfeasible : kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFault;
  }
  return kExitFault;
}
