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


#include "ura/plotdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ura::harness {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_number(std::string_view cell) {
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw std::invalid_argument("bad CSV number '" + std::string(cell) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  if (table.columns.empty()) throw std::invalid_argument("table has no columns");
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (table.columns[c].find_first_of(",\n") != std::string::npos) throw std::invalid_argument("column names may not contain ',' or newlines");
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::invalid_argument("row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      append_number(out, row[c]);
    }
    out += '\n';
  }
  return out;
}

ResultTable from_csv(std::string_view text) {
  ResultTable t;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (header) {
      for (auto c : cells) t.columns.emplace_back(c);
      header = false;
      continue;
    }
    if (cells.size() != t.columns.size()) throw std::invalid_argument("CSV row width does not match the header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_number(c));
    t.rows.push_back(std::move(row));
  }
  if (header) throw std::invalid_argument("CSV has no header");
  return t;
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) { write_text(path, to_csv(table)); }

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return from_csv(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string plot_manifest(const ResultTable& table, const PlotSpec& plot, const std::string& csv_name) {
  table.column(plot.x);  // throws on unknown columns
  table.column(plot.y);
  json m;
  m["schema"] = "ura-plotdata";
  m["schema_version"] = kSchemaVersion;
  m["kind"] = table.kind;
  m["title"] = plot.title;
  m["csv"] = csv_name;
  m["columns"] = table.columns;
  m["rows"] = table.rows.size();
  m["x"] = {{"column", plot.x}, {"label", plot.x_label.empty() ? plot.x : plot.x_label}};
  m["y"] = {{"column", plot.y}, {"label", plot.y_label.empty() ? plot.y : plot.y_label}, {"log", plot.y_log}};
  if (plot.series.empty()) {
    m["series"] = nullptr;
  } else {
    const std::size_t sc = table.column(plot.series);
    std::set<double> values;
    for (const auto& row : table.rows) values.insert(row[sc]);
    m["series"] = {{"column", plot.series}, {"values", std::vector<double>(values.begin(), values.end())}};
  }
  m["wall_time_s"] = table.wall_time_s;
  return m.dump(2) + "\n";
}

std::vector<std::string> manifest_errors(const std::string& manifest_text) {
  std::vector<std::string> errs;
  json m;
  try {
    m = json::parse(manifest_text);
  } catch (const json::exception& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  auto need = [&](const char* key, auto pred, const char* what) {
    if (!m.contains(key)) {
      errs.push_back(std::string("missing '") + key + "'");
    } else if (!pred(m[key])) {
      errs.push_back(std::string("'") + key + "' must be " + what);
    }
  };
  auto is_string = [](const json& j) { return j.is_string(); };
  need("schema", [](const json& j) { return j == "ura-plotdata"; }, "\"ura-plotdata\"");
  need("schema_version", [](const json& j) { return j == kSchemaVersion; }, "1");
  need("kind", is_string, "a string");
  need("title", is_string, "a string");
  need("csv", is_string, "a string");
  need("rows", [](const json& j) { return j.is_number_unsigned() && j.get<std::size_t>() > 0; }, "a positive integer");
  need("columns", [](const json& j) {
    return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const json& c) { return c.is_string(); });
  }, "a non-empty array of strings");
  auto axis = [](const json& j) { return j.is_object() && j.contains("column") && j["column"].is_string() && j.contains("label") && j["label"].is_string(); };
  need("x", axis, "an object with string 'column' and 'label'");
  need("y", [&](const json& j) { return axis(j) && j.contains("log") && j["log"].is_boolean(); }, "an axis object with boolean 'log'");
  need("series", [](const json& j) {
    return j.is_null() || (j.is_object() && j.contains("column") && j["column"].is_string() && j.contains("values") && j["values"].is_array());
  }, "null or an object with 'column' and 'values'");
  need("wall_time_s", [](const json& j) { return j.is_array(); }, "an array");
  if (errs.empty()) {
    const auto& cols = m["columns"];
    auto known = [&](const json& name) { return std::find(cols.begin(), cols.end(), name) != cols.end(); };
    if (!known(m["x"]["column"])) errs.push_back("x column not in columns");
    if (!known(m["y"]["column"])) errs.push_back("y column not in columns");
    if (m["series"].is_object() && !known(m["series"]["column"])) errs.push_back("series column not in columns");
  }
  return errs;
}

PlotFiles emit_plotdata(const ResultTable& table, const PlotSpec& plot, const std::filesystem::path& dir,
                        const std::string& stem) {
  if (table.rows.empty()) throw std::invalid_argument("refusing to emit plot data for an empty table");
  PlotFiles files{dir / (stem + ".csv"), dir / (stem + ".json")};
  const std::string manifest = plot_manifest(table, plot, files.csv.filename().string());
  write_csv(table, files.csv);
  write_text(files.manifest, manifest);
  return files;
}

}  // namespace ura::harness
