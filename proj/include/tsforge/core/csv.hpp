//
// Copyright 2026 The TSForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef TSFORGE_CORE_CSV_HPP_
#define TSFORGE_CORE_CSV_HPP_

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tsforge/core/dataset.hpp"

/*
 * Dataset CSV format:
 *
 *   series_id,t,<feature_0>,...,<feature_{D-1}>[,label]
 *
 * Rows are sorted by (series_id, t); t runs 0..T-1 inside every series. A
 * label column that is constant and integer-valued within every series is
 * read as static class labels, otherwise as temporal labels. Reals are
 * written with 17 significant digits ("%.17g"), so a write/read cycle is
 * lossless.
 */
namespace tsforge::csv {

inline std::string format_real(double v) {
  char buffer[32];
  const int len = std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return std::string(buffer, static_cast<std::size_t>(len));
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

inline double parse_real(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid number '" +
                     std::string(field) + "'");
  }
  return value;
}

inline long long parse_integer(std::string_view field, std::size_t line_no) {
  field = trim(field);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": invalid integer '" +
                     std::string(field) + "'");
  }
  return value;
}

// Raw per-row table keyed by (series_id, t), validated for ordering.
struct Table {
  std::vector<std::string> header;
  std::vector<long long> series_ids;   // one per series block
  std::size_t length = 0;              // T
  std::vector<std::vector<double>> columns_by_row;
};

inline Table read_table(std::istream& in, std::size_t min_value_columns) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");
  ++line_no;
  for (auto field : split_fields(trim(line))) table.header.emplace_back(trim(field));
  if (table.header.size() < 2 + min_value_columns || table.header[0] != "series_id" ||
      table.header[1] != "t") {
    throw ParseError("CSV header must start with 'series_id,t' followed by value columns");
  }
  const std::size_t n_values = table.header.size() - 2;
  long long current_id = 0;
  std::size_t current_t = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_fields(trimmed);
    if (fields.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields");
    }
    const long long id = parse_integer(fields[0], line_no);
    const long long t = parse_integer(fields[1], line_no);
    if (first || id != current_id) {
      if (!first) {
        if (id < current_id) throw ParseError("rows are not sorted by series_id");
        if (table.length == 0) table.length = current_t;
        if (current_t != table.length) throw ParseError("series have different lengths");
      }
      if (t != 0) throw ParseError("line " + std::to_string(line_no) + ": series must start at t=0");
      table.series_ids.push_back(id);
      current_id = id;
      current_t = 0;
      first = false;
    } else if (t != static_cast<long long>(current_t)) {
      throw ParseError("line " + std::to_string(line_no) + ": t must increase by one within a series");
    }
    std::vector<double> row(n_values);
    for (std::size_t c = 0; c < n_values; ++c) row[c] = parse_real(fields[c + 2], line_no);
    table.columns_by_row.push_back(std::move(row));
    ++current_t;
  }
  if (first) throw ParseError("CSV contains no data rows");
  if (table.length == 0) table.length = current_t;
  if (current_t != table.length) throw ParseError("series have different lengths");
  return table;
}

// Static when every series has one integer-valued label.
inline DatasetLabels infer_labels(const std::vector<double>& per_row, std::size_t n,
                                  std::size_t length) {
  bool is_static = true;
  for (std::size_t i = 0; i < n && is_static; ++i) {
    const double first = per_row[i * length];
    if (first != std::floor(first) || std::fabs(first) > 2147483647.0) is_static = false;
    for (std::size_t t = 1; t < length && is_static; ++t) {
      if (per_row[i * length + t] != first) is_static = false;
    }
  }
  DatasetLabels labels;
  if (is_static) {
    std::vector<int> classes(n);
    for (std::size_t i = 0; i < n; ++i) classes[i] = static_cast<int>(per_row[i * length]);
    labels.static_labels = std::move(classes);
  } else {
    labels.temporal_labels = per_row;
  }
  return labels;
}

}  // namespace detail

inline Dataset read_dataset(std::istream& in) {
  auto table = detail::read_table(in, 1);
  const bool has_label = table.header.back() == "label";
  const std::size_t dims = table.header.size() - 2 - (has_label ? 1 : 0);
  if (dims == 0) throw ParseError("CSV has no feature columns");
  const std::size_t n = table.series_ids.size();
  const std::size_t length = table.length;
  std::vector<double> values;
  values.reserve(n * length * dims);
  std::vector<double> label_rows;
  for (const auto& row : table.columns_by_row) {
    values.insert(values.end(), row.begin(), row.begin() + static_cast<std::ptrdiff_t>(dims));
    if (has_label) label_rows.push_back(row.back());
  }
  std::vector<std::string> names(table.header.begin() + 2,
                                 table.header.begin() + 2 + static_cast<std::ptrdiff_t>(dims));
  DatasetLabels labels;
  if (has_label) labels = detail::infer_labels(label_rows, n, length);
  return Dataset(n, length, dims, std::move(values), std::move(labels), std::move(names));
}

inline void write_dataset(std::ostream& out, const Dataset& ds) {
  out << "series_id,t";
  for (const auto& name : ds.feature_names()) out << ',' << name;
  if (ds.label_kind() != LabelKind::none) out << ",label";
  out << '\n';
  for (std::size_t i = 0; i < ds.n(); ++i) {
    for (std::size_t t = 0; t < ds.length(); ++t) {
      out << i << ',' << t;
      for (std::size_t d = 0; d < ds.dims(); ++d) out << ',' << format_real(ds(i, t, d));
      if (ds.has_static_labels()) out << ',' << ds.static_labels()[i];
      if (ds.has_temporal_labels()) out << ',' << format_real(ds.temporal_labels()[i * ds.length() + t]);
      out << '\n';
    }
  }
}

/*
 * Separate label file, for datasets whose values and labels live apart:
 *   series_id,label          static class per series
 *   series_id,t,label        temporal label path
 * Series appear in the same order as in the data file.
 */
inline Dataset attach_labels(const Dataset& ds, std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty label file");
  std::vector<std::string> header;
  for (auto field : detail::split_fields(detail::trim(line))) header.emplace_back(detail::trim(field));
  DatasetLabels labels;
  if (header.size() == 2 && header[0] == "series_id" && header[1] == "label") {
    std::vector<int> classes;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      const auto trimmed = detail::trim(line);
      if (trimmed.empty()) continue;
      const auto fields = detail::split_fields(trimmed);
      if (fields.size() != 2) throw ParseError("label file: expected 2 fields per row");
      classes.push_back(static_cast<int>(detail::parse_integer(fields[1], line_no)));
    }
    if (classes.size() != ds.n()) throw DimensionError("label file series count does not match data");
    labels.static_labels = std::move(classes);
  } else {
    std::stringstream rest;
    rest << line << '\n' << in.rdbuf();
    auto table = detail::read_table(rest, 1);
    if (table.header.size() != 3 || table.header[2] != "label") {
      throw ParseError("label file header must be 'series_id,label' or 'series_id,t,label'");
    }
    if (table.series_ids.size() != ds.n() || table.length != ds.length()) {
      throw DimensionError("label file shape does not match data");
    }
    std::vector<double> path;
    for (const auto& row : table.columns_by_row) path.push_back(row[0]);
    labels.temporal_labels = std::move(path);
  }
  return Dataset(ds.n(), ds.length(), ds.dims(),
                 std::vector<double>(ds.values().begin(), ds.values().end()), std::move(labels),
                 ds.feature_names());
}

inline Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_dataset(in);
}

inline void write_dataset_file(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_dataset(out, ds);
}

}  // namespace tsforge::csv

#endif  // TSFORGE_CORE_CSV_HPP_
