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

#ifndef TSFORGE_METRICS_REPORT_HPP_
#define TSFORGE_METRICS_REPORT_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tsforge/core/csv.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/json_io.hpp"

namespace tsforge::metrics {

enum class Direction { higher_better, lower_better };

inline std::string_view to_string(Direction d) {
  return d == Direction::higher_better ? "higher_better" : "lower_better";
}

inline Direction parse_direction(std::string_view s) {
  if (s == "higher_better") return Direction::higher_better;
  if (s == "lower_better") return Direction::lower_better;
  throw ParseError("direction must be higher_better or lower_better");
}

// A metric result. `score` is empty only when the metric was skipped, in
// which case `skipped` holds the reason.
struct MetricEntry {
  std::optional<double> score;
  Direction direction = Direction::lower_better;
  std::map<std::string, double> components;
  std::string config_digest;
  std::optional<std::string> skipped;

  bool operator==(const MetricEntry&) const = default;
};

inline constexpr std::string_view kMetricNames[] = {"distance", "diversity", "consistency", "downstream_gain",
                                                    "privacy"};

// Entries in insertion order.
class MetricReport {
 public:
  void set(const std::string& name, MetricEntry entry) {
    if (entry.score && !std::isfinite(*entry.score)) throw NumericError("metric '" + name + "' has a non-finite score");
    if (!entry.score && !entry.skipped) throw PreconditionError("metric '" + name + "' has no score and no skip reason");
    for (auto& [n, e] : entries_) {
      if (n == name) {
        e = std::move(entry);
        return;
      }
    }
    entries_.emplace_back(name, std::move(entry));
  }

  const MetricEntry& at(std::string_view name) const {
    for (const auto& [n, e] : entries_) {
      if (n == name) return e;
    }
    throw PreconditionError("report has no metric '" + std::string(name) + "'");
  }

  bool contains(std::string_view name) const {
    for (const auto& [n, e] : entries_) {
      if (n == name) return true;
    }
    return false;
  }

  const std::vector<std::pair<std::string, MetricEntry>>& entries() const { return entries_; }

  bool operator==(const MetricReport&) const = default;

 private:
  std::vector<std::pair<std::string, MetricEntry>> entries_;
};

// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

inline nlohmann::ordered_json to_json(const MetricReport& report) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, e] : report.entries()) {
    nlohmann::ordered_json entry;
    entry["score"] = e.score ? nlohmann::ordered_json(*e.score) : nlohmann::ordered_json(nullptr);
    entry["direction"] = std::string(to_string(e.direction));
    if (e.skipped) entry["skipped"] = *e.skipped;
    nlohmann::ordered_json components = nlohmann::ordered_json::object();
    for (const auto& [k, v] : e.components) components[k] = v;
    entry["components"] = std::move(components);
    entry["config_digest"] = e.config_digest;
    j[name] = std::move(entry);
  }
  return j;
}

inline std::string report_to_json_string(const MetricReport& report) { return dump_json(to_json(report)) + "\n"; }

template <class Json>
MetricReport report_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("metric report must be a JSON object");
  MetricReport report;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (!v.is_object() || !v.contains("score") || !v.contains("direction")) {
      throw ParseError("metric '" + it.key() + "' needs score and direction");
    }
    MetricEntry e;
    if (!v.at("score").is_null()) {
      if (!v.at("score").is_number()) throw ParseError("metric '" + it.key() + "' score must be a number or null");
      e.score = v.at("score").template get<double>();
    }
    e.direction = parse_direction(v.at("direction").template get<std::string>());
    if (v.contains("skipped")) e.skipped = v.at("skipped").template get<std::string>();
    if (v.contains("components")) {
      for (auto c = v.at("components").begin(); c != v.at("components").end(); ++c) {
        if (!c.value().is_number()) throw ParseError("metric components must be numbers");
        e.components[c.key()] = c.value().template get<double>();
      }
    }
    if (v.contains("config_digest")) e.config_digest = v.at("config_digest").template get<std::string>();
    report.set(it.key(), std::move(e));
  }
  return report;
}

// One CSV row of scores in report order; skipped metrics are left empty.
inline void write_report_csv(std::ostream& out, const MetricReport& report, bool header = true) {
  if (header) {
    for (const auto& [name, e] : report.entries()) out << name << ',';
    out << "config_digest\n";
  }
  std::string digest;
  for (const auto& [name, e] : report.entries()) {
    if (e.score) out << csv::format_real(*e.score);
    out << ',';
    digest = e.config_digest;
  }
  out << digest << '\n';
}

}  // namespace tsforge::metrics

#endif  // TSFORGE_METRICS_REPORT_HPP_
