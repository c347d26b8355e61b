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


#include "ura/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ura/achievability.hpp"
#include "ura/list_decoder.hpp"
#include "ura/parallel.hpp"
#include "ura/stats.hpp"
#include "ura/tin_sic.hpp"

namespace ura::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double slot_power_at(double ebno_db, int k, int n1) { return k * std::pow(10.0, ebno_db / 10.0) / n1; }

void check_code(const ExperimentSpec& spec, const polar::PolarCode& code) {
  if (code.n1() != spec.system.n1) throw std::invalid_argument("code blocklength differs from the configured slot length");
  if (code.k() != spec.system.k) throw std::invalid_argument("code payload differs from the configured k");
}

std::vector<polar::ListDecoder> make_decoders(const polar::PolarCode& code, int list_size) {
  const int workers = std::max(worker_count(), 1);
  std::vector<polar::ListDecoder> out;
  out.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) out.emplace_back(code, list_size);
  return out;
}

struct FrameStats {
  double pupe = 0.0;
  double ci95 = 0.0;
};

FrameStats frame_pupe(const ExperimentSpec& spec, const polar::PolarCode& code, int ka, double ebno_db,
                      std::vector<polar::ListDecoder>& decoders) {
  mac::SystemConfig cfg = spec.system;
  cfg.ka = ka;
  cfg.power = mac::power_from_ebno(ebno_db, cfg.n, cfg.k);
  const double slot_power = cfg.slot_power();
  std::vector<double> pupe(static_cast<std::size_t>(spec.trials));
  parallel_for(pupe.size(), [&](std::size_t f, int w) {
    polar::ListDecoder& dec = decoders[static_cast<std::size_t>(w)];
    const mac::SlotDecoder decode = [&](const ComplexSignal& y) {
      return sic::tinsic_decode(y, code, slot_power, cfg.T, dec).messages;
    };
    pupe[f] = mac::simulate_frame(cfg, code, decode, spec.seed, f).pupe();
  }, static_cast<int>(decoders.size()));
  RunningStat st;
  for (double v : pupe) st.add(v);
  return {st.mean(), st.ci95()};
}

}  // namespace

std::size_t ResultTable::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

void ResultTable::add_row(std::vector<double> row, double seconds) {
  if (row.size() != columns.size()) throw std::invalid_argument("row width does not match the schema");
  rows.push_back(std::move(row));
  wall_time_s.push_back(seconds);
}

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSlotPupe: return "slot_pupe_vs_ebno";
    case ExperimentKind::kSchemeCurve: return "ebno_vs_ka_scheme";
    case ExperimentKind::kBoundCurve: return "ebno_vs_ka_bound";
  }
  return "unknown";
}

Scale parse_scale(std::string_view text) {
  if (text == "desk") return Scale::kDesk;
  if (text == "paper") return Scale::kPaper;
  throw std::invalid_argument("scale must be 'desk' or 'paper'");
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (list_size < 1) throw std::invalid_argument("list size must be >= 1");
  switch (kind) {
    case ExperimentKind::kSlotPupe:
      if (r_grid.empty() || ebno_grid_db.empty()) throw std::invalid_argument("slot sweep needs r and Eb/N0 grids");
      for (int r : r_grid)
        if (r < 0) throw std::invalid_argument("collision order must be >= 0");
      break;
    case ExperimentKind::kSchemeCurve:
      if (ka_grid.empty()) throw std::invalid_argument("scheme curve needs a Ka grid");
      if (bisection_iterations < 1 || !(step_db > 0.0)) throw std::invalid_argument("bad search settings");
      break;
    case ExperimentKind::kBoundCurve:
      if (ka_grid.empty() || T_grid.empty() || n1_grid.empty()) throw std::invalid_argument("bound curve needs Ka, T and n1 grids");
      break;
  }
  for (int ka : ka_grid)
    if (ka < 1) throw std::invalid_argument("Ka must be >= 1");
}

ResultTable run_slot_pupe_sweep(const ExperimentSpec& spec, const polar::PolarCode& code) {
  spec.validate();
  check_code(spec, code);
  ResultTable table;
  table.kind = kind_name(ExperimentKind::kSlotPupe);
  table.columns = {"r", "ebno_db", "trials", "pupe", "false_alarm_rate", "mean_sic_depth", "pupe_ci95"};
  auto decoders = make_decoders(code, spec.list_size);
  const int n1 = spec.system.n1;
  const int k = spec.system.k;
  for (int r : spec.r_grid) {
    for (double ebno : spec.ebno_grid_db) {
      const auto t0 = Clock::now();
      const double p = slot_power_at(ebno, k, n1);
      const auto n = static_cast<std::size_t>(spec.trials);
      std::vector<double> pupe(n);
      std::vector<double> alarm(n);
      std::vector<double> depth(n);
      parallel_for(n, [&](std::size_t i, int w) {
        const mac::SlotRealization real = mac::draw_slot_realization(r, k, n1, spec.seed, i, static_cast<std::uint64_t>(r));
        const ComplexSignal y = mac::simulate_slot(real, code, p);
        const sic::TinSicResult res = sic::tinsic_decode(y, code, p, spec.system.T, decoders[static_cast<std::size_t>(w)]);
        int found = 0;
        for (const Bits& m : real.messages) found += std::find(res.messages.begin(), res.messages.end(), m) != res.messages.end();
        bool false_alarm = false;
        for (const Bits& m : res.messages)
          false_alarm |= std::find(real.messages.begin(), real.messages.end(), m) == real.messages.end();
        pupe[i] = r > 0 ? static_cast<double>(r - found) / r : 0.0;
        alarm[i] = false_alarm ? 1.0 : 0.0;
        depth[i] = static_cast<double>(res.messages.size());
      }, static_cast<int>(decoders.size()));
      RunningStat sp;
      for (double v : pupe) sp.add(v);
      const double fa = std::accumulate(alarm.begin(), alarm.end(), 0.0) / spec.trials;
      const double md = std::accumulate(depth.begin(), depth.end(), 0.0) / spec.trials;
      table.add_row({static_cast<double>(r), ebno, static_cast<double>(spec.trials), sp.mean(), fa, md, sp.ci95()},
                    seconds_since(t0));
    }
  }
  return table;
}

ResultTable run_frame_sim(const ExperimentSpec& spec, const polar::PolarCode& code) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.ebno_grid_db.empty()) throw std::invalid_argument("frame simulation needs an Eb/N0 value");
  check_code(spec, code);
  ResultTable table;
  table.kind = "frame_pupe";
  table.columns = {"ebno_db", "ka", "trials", "pupe", "ci95"};
  auto decoders = make_decoders(code, spec.list_size);
  const std::vector<int> kas = spec.ka_grid.empty() ? std::vector<int>{spec.system.ka} : spec.ka_grid;
  for (double ebno : spec.ebno_grid_db) {
    for (int ka : kas) {
      const auto t0 = Clock::now();
      const FrameStats s = frame_pupe(spec, code, ka, ebno, decoders);
      table.add_row({ebno, static_cast<double>(ka), static_cast<double>(spec.trials), s.pupe, s.ci95}, seconds_since(t0));
    }
  }
  return table;
}

ResultTable run_scheme_curve(const ExperimentSpec& spec, const polar::PolarCode& code) {
  spec.validate();
  check_code(spec, code);
  ResultTable table;
  table.kind = kind_name(ExperimentKind::kSchemeCurve);
  table.columns = {"ka", "ebno_db", "pupe", "ci95", "trials", "feasible"};
  auto decoders = make_decoders(code, spec.list_size);
  const double eps = spec.system.eps;
  double start = spec.start_ebno_db;
  for (int ka : spec.ka_grid) {
    const auto t0 = Clock::now();
    auto eval = [&](double e) { return frame_pupe(spec, code, ka, e, decoders); };
    double lo = 0.0;
    double hi = 0.0;
    FrameStats at_hi;
    bool feasible = true;
    FrameStats s = eval(start);
    if (s.pupe <= eps) {
      hi = start;
      at_hi = s;
      lo = hi - spec.step_db;
      for (;;) {
        if (lo < spec.floor_ebno_db) {
          lo = spec.floor_ebno_db;
          const FrameStats f = eval(lo);
          if (f.pupe <= eps) {
            hi = lo;
            at_hi = f;
          }
          break;
        }
        const FrameStats f = eval(lo);
        if (f.pupe > eps) break;
        hi = lo;
        at_hi = f;
        lo -= spec.step_db;
      }
    } else {
      lo = start;
      hi = start + spec.step_db;
      for (;;) {
        if (hi > spec.ceiling_ebno_db) {
          feasible = false;
          break;
        }
        const FrameStats f = eval(hi);
        if (f.pupe <= eps) {
          at_hi = f;
          break;
        }
        lo = hi;
        hi += spec.step_db;
      }
    }
    if (feasible && hi > lo) {
      for (int it = 0; it < spec.bisection_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const FrameStats f = eval(mid);
        if (f.pupe <= eps) {
          hi = mid;
          at_hi = f;
        } else {
          lo = mid;
        }
      }
    }
    if (feasible) {
      table.add_row({static_cast<double>(ka), hi, at_hi.pupe, at_hi.ci95, static_cast<double>(spec.trials), 1.0},
                    seconds_since(t0));
      start = std::max(start, hi);
    } else {
      table.add_row({static_cast<double>(ka), NAN, NAN, NAN, static_cast<double>(spec.trials), 0.0}, seconds_since(t0));
    }
  }
  return table;
}

ResultTable run_bound_curve(const ExperimentSpec& spec) {
  spec.validate();
  ResultTable table;
  table.kind = kind_name(ExperimentKind::kBoundCurve);
  table.columns = {"ka", "n1", "T", "pprime_ratio", "ebno_db", "eps_T", "eps_T_ci95", "n1_optimized", "feasible"};
  for (int T : spec.T_grid) {
    bound::BoundSetup setup;
    setup.k = spec.system.k;
    setup.n = spec.system.n;
    setup.T = T;
    setup.eps = spec.system.eps;
    setup.mc_fading = spec.mc_fading;
    setup.mc_noise = spec.mc_noise;
    setup.seed = spec.seed;
    std::vector<std::pair<bool, std::vector<int>>> series;
    if (spec.n1_grid.size() > 1 || spec.n1_grid.front() != spec.system.n1) series.emplace_back(true, spec.n1_grid);
    if (spec.include_fixed_n1) series.emplace_back(false, std::vector<int>{spec.system.n1});
    for (const auto& [optimized, grid] : series) {
      const auto t0 = Clock::now();
      bound::OptimizeOptions opts;
      opts.n1_grid = grid;
      opts.ceiling_ebno_db = spec.ceiling_ebno_db;
      const auto pts = bound::optimize_ebno(setup, spec.ka_grid, opts);
      const double per_row = seconds_since(t0) / static_cast<double>(pts.size());
      for (const auto& p : pts)
        table.add_row({static_cast<double>(p.ka), static_cast<double>(p.n1), static_cast<double>(T), p.pprime_ratio,
                       p.ebno_db, p.eps_T, p.eps_T_ci95, optimized ? 1.0 : 0.0, p.feasible ? 1.0 : 0.0},
                      per_row);
    }
  }
  return table;
}

RunConfig run_config_from_json(const std::string& text) {
  using nlohmann::json;
  RunConfig rc;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    const int version = j.value("schema_version", 1);
    if (version != 1) throw std::invalid_argument("unsupported config schema_version " + std::to_string(version));
    mac::SystemConfig& s = rc.system;
    s.n = j.value("n", s.n);
    s.n1 = j.value("n1", s.n1);
    s.ka = j.value("ka", s.ka);
    s.k = j.value("k", s.k);
    s.T = j.value("T", s.T);
    s.eps = j.value("eps", s.eps);
    s.k_tot = j.value("k_tot", s.k_tot);
    rc.list_size = j.value("list_size", 0);
    if (j.contains("ebno_db")) {
      const json& e = j["ebno_db"];
      if (e.is_number()) {
        rc.ebno_db.push_back(e.get<double>());
      } else if (e.is_array()) {
        for (const json& v : e) rc.ebno_db.push_back(v.get<double>());
      } else {
        throw std::invalid_argument("'ebno_db' must be a number or an array");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  rc.system.power = 1.0;  // placeholder so validate() checks the rest
  rc.system.validate();
  rc.system.power = 0.0;
  if (rc.list_size < 0) throw std::invalid_argument("list_size must be >= 0");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return run_config_from_json(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

bool has_infeasible(const ResultTable& table) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), "feasible");
  if (it == table.columns.end()) return false;
  const auto c = static_cast<std::size_t>(it - table.columns.begin());
  return std::any_of(table.rows.begin(), table.rows.end(), [&](const auto& row) { return row[c] == 0.0; });
}

namespace {

std::vector<double> range(double from, double to, double step) {
  std::vector<double> out;
  for (double v = from; v <= to + 1e-9; v += step) out.push_back(v);
  return out;
}

std::vector<int> irange(int from, int to, int step) {
  std::vector<int> out;
  for (int v = from; v <= to; v += step) out.push_back(v);
  return out;
}

polar::ConstructionChannel default_construction() {
  polar::ConstructionChannel ch;
  ch.collision_order = 14;
  ch.design_ebno_db = 15.0;
  return ch;
}

}  // namespace

FigurePreset fig2_preset(Scale scale, std::uint64_t seed) {
  FigurePreset p;
  p.construction = default_construction();
  ExperimentSpec s;
  s.kind = ExperimentKind::kSlotPupe;
  s.seed = seed;
  s.r_grid = {1, 2, 4, 6, 9, 12, 14};
  s.list_size = 64;
  if (scale == Scale::kDesk) {
    s.trials = 200;
    s.ebno_grid_db = range(7.0, 31.0, 3.0);
    p.construction_trials = 10000;
  } else {
    s.trials = 2000;
    s.ebno_grid_db = range(7.0, 31.0, 1.0);
    p.construction_trials = 100000;
  }
  p.experiments.push_back(s);
  return p;
}

FigurePreset fig3_preset(Scale scale, std::uint64_t seed) {
  FigurePreset p;
  p.construction = default_construction();
  ExperimentSpec scheme;
  scheme.kind = ExperimentKind::kSchemeCurve;
  scheme.seed = seed;
  ExperimentSpec bnd;
  bnd.kind = ExperimentKind::kBoundCurve;
  bnd.seed = seed;
  bnd.T_grid = {4, 8, 14};
  bnd.ceiling_ebno_db = 60.0;
  if (scale == Scale::kDesk) {
    scheme.ka_grid = {25, 50, 100, 150, 200, 300};
    scheme.trials = 50;
    scheme.list_size = 16;
    scheme.bisection_iterations = 5;
    bnd.ka_grid = irange(50, 750, 50);
    bnd.mc_fading = 1000;
    bnd.mc_noise = 1000;
    p.construction_trials = 10000;
  } else {
    scheme.ka_grid = irange(25, 750, 25);
    scheme.trials = 500;
    scheme.list_size = 64;
    scheme.bisection_iterations = 7;
    bnd.ka_grid = irange(25, 750, 25);
    bnd.mc_fading = 10000;
    bnd.mc_noise = 4000;
    p.construction_trials = 100000;
  }
  p.experiments.push_back(scheme);
  p.experiments.push_back(bnd);
  return p;
}

}  // namespace ura::harness
