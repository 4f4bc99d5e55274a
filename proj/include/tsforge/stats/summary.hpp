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

#ifndef TSFORGE_STATS_SUMMARY_HPP_
#define TSFORGE_STATS_SUMMARY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/spectral.hpp"

namespace tsforge::stats {

enum class ScalarStat { mean, std, min, max, q25, median, q75 };

inline constexpr std::array<ScalarStat, 7> kScalarStats = {
    ScalarStat::mean, ScalarStat::std, ScalarStat::min, ScalarStat::max,
    ScalarStat::q25, ScalarStat::median, ScalarStat::q75};

inline std::string_view to_string(ScalarStat s) {
  switch (s) {
    case ScalarStat::mean: return "mean";
    case ScalarStat::std: return "std";
    case ScalarStat::min: return "min";
    case ScalarStat::max: return "max";
    case ScalarStat::q25: return "q25";
    case ScalarStat::median: return "median";
    case ScalarStat::q75: return "q75";
  }
  return "";
}

// How scalar statistics combine the N series of a feature: pooled over all
// N*T values, or computed per series and then averaged.
enum class Pooling { pooled, per_series };

/*
 * Which statistics enter S(D). Layout order per feature is fixed:
 * scalar stats (in kScalarStats order), then one autocorrelation per lag,
 * then one power value per frequency band. Features are concatenated in
 * index order.
 */
struct StatConfig {
  std::vector<ScalarStat> scalars;
  std::vector<std::size_t> acf_lags;
  std::size_t band_power = 0;  // number of bands, 0 = disabled
  Pooling pooling = Pooling::pooled;

  static StatConfig defaults() {
    StatConfig cfg;
    cfg.scalars.assign(kScalarStats.begin(), kScalarStats.end());
    cfg.acf_lags = {1, 2, 3, 4, 5, 6, 7, 8};
    cfg.band_power = 5;
    return cfg;
  }

  bool has(ScalarStat s) const { return std::find(scalars.begin(), scalars.end(), s) != scalars.end(); }

  std::size_t stats_per_feature() const { return scalars.size() + acf_lags.size() + band_power; }

  // Throws PreconditionError unless the config can summarize series of length T.
  void validate(std::size_t length) const {
    if (stats_per_feature() == 0) throw PreconditionError("stat config enables no statistics");
    for (std::size_t lag : acf_lags) {
      if (lag < 1 || lag >= length) {
        throw PreconditionError("acf lag " + std::to_string(lag) + " must lie in [1, T)");
      }
    }
    if (band_power > length / 2) throw PreconditionError("band_power bands exceed floor(T/2)");
  }

  friend bool operator==(const StatConfig&, const StatConfig&) = default;
};

struct StatDescriptor {
  std::string name;
  std::size_t feature = 0;
  std::optional<std::size_t> parameter;  // lag or band index

  friend bool operator==(const StatDescriptor&, const StatDescriptor&) = default;
};

struct StatVector {
  std::vector<double> values;
  std::vector<StatDescriptor> layout;
};

inline std::vector<StatDescriptor> make_layout(const StatConfig& cfg, std::size_t dims) {
  std::vector<StatDescriptor> layout;
  layout.reserve(cfg.stats_per_feature() * dims);
  for (std::size_t d = 0; d < dims; ++d) {
    for (ScalarStat s : kScalarStats) {
      if (cfg.has(s)) layout.push_back({std::string(to_string(s)), d, std::nullopt});
    }
    for (std::size_t lag : cfg.acf_lags) layout.push_back({"acf", d, lag});
    for (std::size_t b = 0; b < cfg.band_power; ++b) layout.push_back({"band_power", d, b});
  }
  return layout;
}

namespace detail {

// Linear interpolation between order statistics of a sorted sample.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline void scalar_stats(std::vector<double> sample, const StatConfig& cfg, std::vector<double>& out) {
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : sample) var += (v - mean) * (v - mean);
  var /= n;
  for (ScalarStat s : kScalarStats) {
    if (!cfg.has(s)) continue;
    switch (s) {
      case ScalarStat::mean: out.push_back(mean); break;
      case ScalarStat::std: out.push_back(std::sqrt(var)); break;
      case ScalarStat::min: out.push_back(sample.front()); break;
      case ScalarStat::max: out.push_back(sample.back()); break;
      case ScalarStat::q25: out.push_back(quantile_sorted(sample, 0.25)); break;
      case ScalarStat::median: out.push_back(quantile_sorted(sample, 0.5)); break;
      case ScalarStat::q75: out.push_back(quantile_sorted(sample, 0.75)); break;
    }
  }
}

}  // namespace detail

// Sample autocorrelation of x at `lag`, biased normalization
// sum_t (x_t - m)(x_{t+lag} - m) / sum_t (x_t - m)^2. Zero-variance series
// have autocorrelation 0 at every lag.
inline double autocorrelation(std::span<const double> x, std::size_t stride, std::size_t lag) {
  const std::size_t length = x.size() / stride + (x.size() % stride != 0 ? 1 : 0);
  double mean = 0.0;
  for (std::size_t t = 0; t < length; ++t) mean += x[t * stride];
  mean /= static_cast<double>(length);
  double denom = 0.0;
  for (std::size_t t = 0; t < length; ++t) {
    const double c = x[t * stride] - mean;
    denom += c * c;
  }
  if (denom <= 0.0 || lag >= length) return 0.0;
  double num = 0.0;
  for (std::size_t t = 0; t + lag < length; ++t) {
    num += (x[t * stride] - mean) * (x[(t + lag) * stride] - mean);
  }
  return num / denom;
}

inline StatVector summarize(const Dataset& ds, const StatConfig& cfg) {
  cfg.validate(ds.length());
  const std::size_t n = ds.n();
  const std::size_t length = ds.length();
  const std::size_t dims = ds.dims();
  StatVector result;
  result.layout = make_layout(cfg, dims);
  result.values.reserve(result.layout.size());

  const std::size_t n_freq = length / 2;  // bins 1..floor(T/2), DC excluded
  std::optional<DftTable> dft;
  if (cfg.band_power > 0) dft.emplace(length);
  std::vector<double> power(length / 2 + 1);

  for (std::size_t d = 0; d < dims; ++d) {
    if (!cfg.scalars.empty()) {
      if (cfg.pooling == Pooling::pooled) {
        std::vector<double> pooled;
        pooled.reserve(n * length);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t t = 0; t < length; ++t) pooled.push_back(ds(i, t, d));
        }
        detail::scalar_stats(std::move(pooled), cfg, result.values);
      } else {
        std::vector<double> accum(cfg.scalars.size(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          std::vector<double> one;
          std::vector<double> sample(length);
          for (std::size_t t = 0; t < length; ++t) sample[t] = ds(i, t, d);
          detail::scalar_stats(std::move(sample), cfg, one);
          for (std::size_t k = 0; k < one.size(); ++k) accum[k] += one[k];
        }
        for (double v : accum) result.values.push_back(v / static_cast<double>(n));
      }
    }
    for (std::size_t lag : cfg.acf_lags) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += autocorrelation(ds.series(i).subspan(d), dims, lag);
      }
      result.values.push_back(acc / static_cast<double>(n));
    }
    if (cfg.band_power > 0) {
      std::vector<double> bands(cfg.band_power, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        dft->periodogram(ds.series(i).subspan(d), dims, power);
        for (std::size_t b = 0; b < cfg.band_power; ++b) {
          const std::size_t lo = 1 + b * n_freq / cfg.band_power;
          const std::size_t hi = 1 + (b + 1) * n_freq / cfg.band_power;
          double sum = 0.0;
          for (std::size_t k = lo; k < hi; ++k) sum += power[k];
          bands[b] += sum / static_cast<double>(hi - lo);
        }
      }
      for (double v : bands) result.values.push_back(v / static_cast<double>(n));
    }
  }
  return result;
}

enum class Norm { l1, l2, linf };

inline Norm parse_norm(std::string_view name) {
  if (name == "L1" || name == "l1") return Norm::l1;
  if (name == "L2" || name == "l2") return Norm::l2;
  if (name == "Linf" || name == "linf") return Norm::linf;
  throw ParseError("unknown norm '" + std::string(name) + "' (expected L1, L2 or Linf)");
}

inline std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::l1: return "L1";
    case Norm::l2: return "L2";
    case Norm::linf: return "Linf";
  }
  return "";
}

inline double norm_of_difference(std::span<const double> a, std::span<const double> b, Norm norm) {
  if (a.size() != b.size()) throw DimensionError("vectors differ in length");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = std::fabs(a[k] - b[k]);
    switch (norm) {
      case Norm::l1: acc += diff; break;
      case Norm::l2: acc += diff * diff; break;
      case Norm::linf: acc = std::max(acc, diff); break;
    }
  }
  return norm == Norm::l2 ? std::sqrt(acc) : acc;
}

inline double stat_distance(const StatVector& a, const StatVector& b, Norm norm = Norm::l2) {
  if (a.layout != b.layout) throw DimensionError("stat vectors have different layouts");
  return norm_of_difference(a.values, b.values, norm);
}

// JSON form: one key per enabled statistic, e.g.
// {"mean": true, "std": true, "acf_lags": [1, 2], "band_power": 5}.
// An optional "pooling": "per_series" switches scalar pooling.
inline nlohmann::ordered_json to_json(const StatConfig& cfg) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (ScalarStat s : kScalarStats) {
    if (cfg.has(s)) j[std::string(to_string(s))] = true;
  }
  if (!cfg.acf_lags.empty()) j["acf_lags"] = cfg.acf_lags;
  if (cfg.band_power > 0) j["band_power"] = cfg.band_power;
  if (cfg.pooling == Pooling::per_series) j["pooling"] = "per_series";
  return j;
}

template <typename Json>
StatConfig stat_config_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("stat config must be a JSON object");
  StatConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto& value = it.value();
    bool known = false;
    for (ScalarStat s : kScalarStats) {
      if (key == to_string(s)) {
        known = true;
        if (!value.is_boolean()) throw ParseError("stat '" + key + "' must be true or false");
        if (value.template get<bool>()) cfg.scalars.push_back(s);
      }
    }
    if (known) continue;
    if (key == "acf_lags") {
      if (!value.is_array()) throw ParseError("acf_lags must be an array of positive integers");
      for (const auto& lag : value) {
        if (!lag.is_number_integer() || lag.template get<long long>() < 1) {
          throw ParseError("acf_lags must be an array of positive integers");
        }
        cfg.acf_lags.push_back(lag.template get<std::size_t>());
      }
    } else if (key == "band_power") {
      if (!value.is_number_integer() || value.template get<long long>() < 0) {
        throw ParseError("band_power must be a non-negative integer");
      }
      cfg.band_power = value.template get<std::size_t>();
    } else if (key == "pooling") {
      const auto mode = value.template get<std::string>();
      if (mode == "pooled") {
        cfg.pooling = Pooling::pooled;
      } else if (mode == "per_series") {
        cfg.pooling = Pooling::per_series;
      } else {
        throw ParseError("pooling must be 'pooled' or 'per_series'");
      }
    } else {
      throw ParseError("unknown statistic '" + key + "'");
    }
  }
  std::vector<ScalarStat> ordered;
  for (ScalarStat s : kScalarStats) {
    if (cfg.has(s)) ordered.push_back(s);
  }
  cfg.scalars = std::move(ordered);
  if (cfg.stats_per_feature() == 0) throw ParseError("stat config enables no statistics");
  return cfg;
}

}  // namespace tsforge::stats

#endif  // TSFORGE_STATS_SUMMARY_HPP_
