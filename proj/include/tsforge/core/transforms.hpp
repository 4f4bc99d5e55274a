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

#ifndef TSFORGE_CORE_TRANSFORMS_HPP_
#define TSFORGE_CORE_TRANSFORMS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"

namespace tsforge {

// Contiguous windows of length `window` taken every `stride` steps from each
// series. Static labels are replicated, temporal labels sliced alongside.
inline Dataset window_split(const Dataset& ds, std::size_t window, std::size_t stride) {
  if (window < 1 || stride < 1) throw PreconditionError("window and stride must be positive");
  if (window > ds.length()) throw PreconditionError("window longer than the series");
  const std::size_t per_series = (ds.length() - window) / stride + 1;
  const std::size_t dims = ds.dims();
  DatasetBuilder builder(window, dims, ds.label_kind(), ds.feature_names());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto series = ds.series(i);
    for (std::size_t w = 0; w < per_series; ++w) {
      const std::size_t start = w * stride;
      builder.add(series.subspan(start * dims, window * dims),
                  ds.has_static_labels() ? ds.static_labels()[i] : 0,
                  ds.has_temporal_labels() ? ds.temporal_path(i).subspan(start, window)
                                           : std::span<const double>{});
    }
  }
  return std::move(builder).build();
}

struct ScalerState {
  std::vector<double> per_feature_min;
  std::vector<double> per_feature_max;

  bool is_constant(std::size_t d) const { return per_feature_min[d] == per_feature_max[d]; }
  std::size_t dims() const { return per_feature_min.size(); }
};

inline ScalerState fit_minmax(const Dataset& ds) {
  ScalerState state{std::vector<double>(ds.dims(), std::numeric_limits<double>::infinity()),
                    std::vector<double>(ds.dims(), -std::numeric_limits<double>::infinity())};
  const auto values = ds.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const std::size_t d = k % ds.dims();
    state.per_feature_min[d] = std::min(state.per_feature_min[d], values[k]);
    state.per_feature_max[d] = std::max(state.per_feature_max[d], values[k]);
  }
  return state;
}

// Applies an already fitted scaler; values outside the fitted range map
// outside [0, 1]. Constant features map to 0.
inline Dataset minmax_apply(const Dataset& ds, const ScalerState& state) {
  if (state.dims() != ds.dims()) throw DimensionError("scaler feature count does not match D");
  std::vector<double> out(ds.values().begin(), ds.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t d = k % ds.dims();
    out[k] = state.is_constant(d)
                 ? 0.0
                 : (out[k] - state.per_feature_min[d]) /
                       (state.per_feature_max[d] - state.per_feature_min[d]);
  }
  return with_values(ds, std::move(out));
}

inline std::pair<Dataset, ScalerState> minmax_scale(const Dataset& ds) {
  ScalerState state = fit_minmax(ds);
  Dataset scaled = minmax_apply(ds, state);
  return {std::move(scaled), std::move(state)};
}

inline Dataset minmax_unscale(const Dataset& ds, const ScalerState& state) {
  if (state.dims() != ds.dims()) throw DimensionError("scaler feature count does not match D");
  std::vector<double> out(ds.values().begin(), ds.values().end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t d = k % ds.dims();
    const double lo = state.per_feature_min[d];
    out[k] = state.is_constant(d) ? lo : lo + out[k] * (state.per_feature_max[d] - lo);
  }
  return with_values(ds, std::move(out));
}

// Series-level random partition; the first part holds round(N * (1 - f))
// series.
inline std::pair<Dataset, Dataset> train_holdout_split(const Dataset& ds, double holdout_fraction,
                                                       Seed seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw PreconditionError("holdout fraction must lie in (0, 1)");
  }
  if (ds.n() < 2) throw PreconditionError("train/holdout split needs at least two series");
  const auto n_train =
      static_cast<std::size_t>(std::llround(static_cast<double>(ds.n()) * (1.0 - holdout_fraction)));
  if (n_train == 0 || n_train == ds.n()) {
    throw PreconditionError("train/holdout split would leave a partition empty");
  }
  Rng rng(seed);
  const auto order = rng.permutation(ds.n());
  const std::span<const std::size_t> all(order);
  return {select(ds, all.first(n_train)), select(ds, all.subspan(n_train))};
}

}  // namespace tsforge

#endif  // TSFORGE_CORE_TRANSFORMS_HPP_
