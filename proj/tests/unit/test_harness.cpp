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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "ura/experiments.hpp"
#include "ura/plotdata.hpp"
#include "ura/polar_code.hpp"

namespace {

using namespace ura;
using namespace ura::harness;

const polar::PolarCode& shared_code() {
  static const polar::PolarCode code = [] {
    polar::PolarCodeSpec spec;
    spec.list_size = 16;
    spec.frozen = polar::construct_frozen_set(512, 121, polar::ConstructionChannel{}, 2000, 7);
    return polar::PolarCode(spec);
  }();
  return code;
}

ResultTable sample_table() {
  ResultTable t;
  t.kind = "slot_pupe";
  t.columns = {"r", "ebno_db", "pupe"};
  t.add_row({1, 7.0, 0.125}, 0.5);
  t.add_row({9, 10.0 / 3.0, std::numeric_limits<double>::quiet_NaN()}, 0.25);
  t.add_row({14, -1e-300, 1.0 / 7.0}, 0.0);
  return t;
}

TEST(Plotdata, CsvRoundTripIsExact) {
  const ResultTable t = sample_table();
  const ResultTable back = from_csv(to_csv(t));
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (std::isnan(t.rows[i][c]))
        EXPECT_TRUE(std::isnan(back.rows[i][c]));
      else
        EXPECT_EQ(back.rows[i][c], t.rows[i][c]);
    }
}

TEST(Plotdata, MalformedCsvThrows) {
  EXPECT_THROW(from_csv(""), std::invalid_argument);
  EXPECT_THROW(from_csv("a,b\n1\n"), std::invalid_argument);
  EXPECT_THROW(from_csv("a,b\n1,x\n"), std::invalid_argument);
}

TEST(Plotdata, EmitWritesValidManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "ura_test_plotdata";
  std::filesystem::remove_all(dir);
  PlotSpec plot{"PUPE", "ebno_db", "pupe", "r", "Eb/N0 (dB)", "PUPE", true};
  const PlotFiles files = emit_plotdata(sample_table(), plot, dir, "slot");
  ASSERT_TRUE(std::filesystem::exists(files.csv));
  std::ifstream in(files.manifest);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_TRUE(manifest_errors(text).empty());
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["rows"], 3);
  EXPECT_EQ(j["csv"], "slot.csv");
  EXPECT_EQ(j["series"]["values"].size(), 3u);
  EXPECT_EQ(read_csv(files.csv).rows.size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(Plotdata, ManifestErrorsAreReported) {
  EXPECT_FALSE(manifest_errors("not json").empty());
  EXPECT_FALSE(manifest_errors("{}").empty());
  auto j = nlohmann::json::parse(plot_manifest(sample_table(), {"t", "ebno_db", "pupe", "", "x", "y", false}, "a.csv"));
  EXPECT_TRUE(manifest_errors(j.dump()).empty());
  j["y"]["column"] = "missing";
  EXPECT_FALSE(manifest_errors(j.dump()).empty());
}

TEST(Plotdata, EmptyTableRefused) {
  ResultTable t;
  t.columns = {"a"};
  EXPECT_THROW(emit_plotdata(t, {"t", "a", "a", "", "", "", false}, std::filesystem::temp_directory_path(), "e"),
               std::invalid_argument);
}

TEST(RunConfig, ParsesAndValidates) {
  const RunConfig rc = run_config_from_json(R"({"schema_version":1,"n1":256,"ka":50,"ebno_db":[9,10.5]})");
  EXPECT_EQ(rc.system.n1, 256);
  EXPECT_EQ(rc.system.ka, 50);
  EXPECT_EQ(rc.system.n, 30000);
  ASSERT_EQ(rc.ebno_db.size(), 2u);
  EXPECT_DOUBLE_EQ(rc.ebno_db[1], 10.5);
  EXPECT_EQ(run_config_from_json(R"({"ebno_db":12})").ebno_db.size(), 1u);
  EXPECT_THROW(run_config_from_json("[1]"), std::invalid_argument);
  EXPECT_THROW(run_config_from_json(R"({"schema_version":2})"), std::invalid_argument);
  EXPECT_THROW(run_config_from_json(R"({"n1":0})"), std::invalid_argument);
  EXPECT_THROW(run_config_from_json(R"({"ebno_db":"ten"})"), std::invalid_argument);
  EXPECT_THROW(run_config_from_json("{"), std::invalid_argument);
}

TEST(Presets, AreValid) {
  for (Scale s : {Scale::kDesk, Scale::kPaper}) {
    for (const auto& e : fig2_preset(s, 1).experiments) EXPECT_NO_THROW(e.validate());
    for (const auto& e : fig3_preset(s, 1).experiments) EXPECT_NO_THROW(e.validate());
  }
  EXPECT_EQ(parse_scale("paper"), Scale::kPaper);
  EXPECT_THROW(parse_scale("huge"), std::invalid_argument);
}

ExperimentSpec slot_spec() {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kSlotPupe;
  spec.r_grid = {1, 3};
  spec.ebno_grid_db = {8.0, 40.0};
  spec.trials = 40;
  spec.list_size = 8;
  spec.seed = 3;
  return spec;
}

TEST(SlotSweep, DeterministicAndSane) {
  const ExperimentSpec spec = slot_spec();
  const ResultTable a = run_slot_pupe_sweep(spec, shared_code());
  const ResultTable b = run_slot_pupe_sweep(spec, shared_code());
  ASSERT_EQ(a.rows.size(), 4u);
  EXPECT_EQ(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double p = a.at(i, "pupe");
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_GE(a.at(i, "mean_sic_depth"), 0.0);
    EXPECT_LE(a.at(i, "mean_sic_depth"), a.at(i, "r"));
  }
  // Single user at 40 dB is decoded essentially always.
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.at(i, "r") == 1 && a.at(i, "ebno_db") == 40.0) EXPECT_LT(a.at(i, "pupe"), 1e-2);
}

TEST(SlotSweep, InvalidSpecRejected) {
  ExperimentSpec spec = slot_spec();
  spec.r_grid = {-1};
  EXPECT_THROW(run_slot_pupe_sweep(spec, shared_code()), std::invalid_argument);
  spec = slot_spec();
  spec.ebno_grid_db.clear();
  EXPECT_THROW(run_slot_pupe_sweep(spec, shared_code()), std::invalid_argument);
  spec = slot_spec();
  spec.trials = 0;
  EXPECT_THROW(run_slot_pupe_sweep(spec, shared_code()), std::invalid_argument);
}

TEST(SlotSweep, EmptySlotsCountOnlyFalseAlarms) {
  ExperimentSpec spec = slot_spec();
  spec.r_grid = {0};
  spec.ebno_grid_db = {10.0};
  const ResultTable t = run_slot_pupe_sweep(spec, shared_code());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.at(0, "pupe"), 0.0);
  EXPECT_LE(t.at(0, "false_alarm_rate"), 0.05);
}

TEST(FrameSim, HighSnrSparseLoad) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kSchemeCurve;
  spec.system.ka = 5;
  spec.ebno_grid_db = {30.0};
  spec.trials = 3;
  spec.list_size = 8;
  const ResultTable t = run_frame_sim(spec, shared_code());
  ASSERT_EQ(t.rows.size(), 1u);
  // With 5 users in 58 slots, losses come only from rare collisions beyond T.
  EXPECT_LE(t.at(0, "pupe"), 0.1);
}

TEST(BoundCurve, DeterministicAndOrdered) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kBoundCurve;
  spec.ka_grid = {100};
  spec.T_grid = {4, 14};
  spec.n1_grid = {256, 512};
  spec.mc_fading = 300;
  spec.mc_noise = 300;
  spec.ceiling_ebno_db = 60;
  const ResultTable a = run_bound_curve(spec);
  EXPECT_EQ(a.rows, run_bound_curve(spec).rows);
  ASSERT_EQ(a.rows.size(), 4u);  // {T=4, T=14} x {optimized, fixed}
  auto find = [&](int T, bool opt) {
    for (std::size_t i = 0; i < a.rows.size(); ++i)
      if (a.at(i, "T") == T && (a.at(i, "n1_optimized") != 0.0) == opt) return a.at(i, "ebno_db");
    return std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_LE(find(14, true), find(14, false) + 1e-9);
  EXPECT_LE(find(4, true), find(4, false) + 1e-9);
  EXPECT_LE(find(14, true), find(4, true) + 0.05);
  EXPECT_FALSE(has_infeasible(a));
}

TEST(BoundCurve, InfeasibleFlagged) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::kBoundCurve;
  spec.ka_grid = {700};
  spec.T_grid = {4};
  spec.n1_grid = {512};
  spec.include_fixed_n1 = true;
  spec.mc_fading = 200;
  spec.mc_noise = 200;
  const ResultTable t = run_bound_curve(spec);
  EXPECT_TRUE(has_infeasible(t));
}

}  // namespace
