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

#ifndef TSFORGE_AUGMENT_AUGMENTATIONS_HPP_
#define TSFORGE_AUGMENT_AUGMENTATIONS_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"

// Every augmentation emits exactly n_new series of the source's (T, D); new
// series j draws its randomness from derive_seed(seed, j) and starts from a
// uniformly chosen source series whose label it carries.
namespace tsforge::augment {

// ---------------------------------------------------------------------------
// Interpolation helpers.

// Resamples a [L, D] block to [M, D]; output point i sits at source position
// i * (L - 1) / (M - 1).
inline std::vector<double> resample_linear(std::span<const double> src, std::size_t dims,
                                           std::size_t target) {
  const std::size_t length = src.size() / dims;
  std::vector<double> out(target * dims);
  for (std::size_t i = 0; i < target; ++i) {
    const double pos = target == 1 || length == 1
                           ? 0.0
                           : static_cast<double>(i) * static_cast<double>(length - 1) /
                                 static_cast<double>(target - 1);
    const auto lo = std::min(static_cast<std::size_t>(std::floor(pos)), length - 1);
    const std::size_t hi = std::min(lo + 1, length - 1);
    const double frac = pos - static_cast<double>(lo);
    for (std::size_t d = 0; d < dims; ++d) {
      const double a = src[lo * dims + d];
      const double b = src[hi * dims + d];
      out[i * dims + d] = frac == 0.0 ? a : a + frac * (b - a);
    }
  }
  return out;
}

// Same positions as resample_linear, nearest neighbour; used for labels.
inline std::vector<double> resample_nearest(std::span<const double> src, std::size_t target) {
  const std::size_t length = src.size();
  std::vector<double> out(target);
  for (std::size_t i = 0; i < target; ++i) {
    const double pos = target == 1 || length == 1
                           ? 0.0
                           : static_cast<double>(i) * static_cast<double>(length - 1) /
                                 static_cast<double>(target - 1);
    out[i] = src[std::min(static_cast<std::size_t>(std::llround(pos)), length - 1)];
  }
  return out;
}

// Natural cubic spline through (xs, ys), evaluated at `queries`. Second
// derivatives come from the tridiagonal system solved by the Thomas
// algorithm. xs must be strictly increasing.
inline std::vector<double> natural_cubic_spline(std::span<const double> xs, std::span<const double> ys,
                                                std::span<const double> queries) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw PreconditionError("spline needs at least two knots");
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    if (!(h[i] > 0.0)) throw PreconditionError("spline knots must be strictly increasing");
  }
  std::vector<double> second(n, 0.0);
  if (n > 2) {
    const std::size_t m = n - 2;
    std::vector<double> diag(m), upper(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t i = k + 1;
      diag[k] = 2.0 * (h[i - 1] + h[i]);
      upper[k] = h[i];
      rhs[k] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
    }
    // Forward sweep; the sub-diagonal entry of row k is h[k].
    for (std::size_t k = 1; k < m; ++k) {
      const double factor = h[k] / diag[k - 1];
      diag[k] -= factor * upper[k - 1];
      rhs[k] -= factor * rhs[k - 1];
    }
    second[m] = rhs[m - 1] / diag[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) second[k + 1] = (rhs[k] - upper[k] * second[k + 2]) / diag[k];
  }
  std::vector<double> out(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const double x = queries[q];
    std::size_t seg = 0;
    while (seg + 2 < n && x > xs[seg + 1]) ++seg;
    const double a = (xs[seg + 1] - x) / h[seg];
    const double b = (x - xs[seg]) / h[seg];
    out[q] = a * ys[seg] + b * ys[seg + 1] +
             ((a * a * a - a) * second[seg] + (b * b * b - b) * second[seg + 1]) * h[seg] * h[seg] / 6.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single-series kernels. `series` is a [T, D] block.

enum class FlipMode { sign, time };

inline std::vector<double> flip_series(std::span<const double> series, std::size_t dims, FlipMode mode) {
  std::vector<double> out(series.begin(), series.end());
  if (mode == FlipMode::sign) {
    for (double& v : out) v = -v;
  } else {
    const std::size_t length = series.size() / dims;
    for (std::size_t t = 0; t < length; ++t) {
      for (std::size_t d = 0; d < dims; ++d) out[t * dims + d] = series[(length - 1 - t) * dims + d];
    }
  }
  return out;
}

// Cuts at the sorted interior points `cuts` (each in [1, T-1]) and
// concatenates the pieces in `order`.
inline std::vector<double> shuffle_slices(std::span<const double> series, std::size_t dims,
                                          std::span<const std::size_t> cuts,
                                          std::span<const std::size_t> order) {
  const std::size_t length = series.size() / dims;
  std::vector<std::size_t> bounds{0};
  bounds.insert(bounds.end(), cuts.begin(), cuts.end());
  bounds.push_back(length);
  if (order.size() + 1 != bounds.size()) throw DimensionError("slice order does not match cut count");
  std::vector<double> out;
  out.reserve(series.size());
  for (std::size_t piece : order) {
    out.insert(out.end(), series.begin() + static_cast<std::ptrdiff_t>(bounds[piece] * dims),
               series.begin() + static_cast<std::ptrdiff_t>(bounds[piece + 1] * dims));
  }
  return out;
}

// Smooth multiplicative curve on t = 0..T-1 through knot values placed at
// equally spaced times.
inline std::vector<double> magnitude_curve(std::span<const double> knot_values, std::size_t length) {
  if (knot_values.size() < 2) throw PreconditionError("magnitude warp needs at least two knots");
  if (length == 1) return {knot_values[0]};
  std::vector<double> xs(knot_values.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xs[k] = static_cast<double>(k) * static_cast<double>(length - 1) / static_cast<double>(xs.size() - 1);
  }
  std::vector<double> ts(length);
  for (std::size_t t = 0; t < length; ++t) ts[t] = static_cast<double>(t);
  return natural_cubic_spline(xs, knot_values, ts);
}

inline std::vector<double> warp_magnitude(std::span<const double> series, std::size_t dims,
                                          std::span<const double> knot_values) {
  const std::size_t length = series.size() / dims;
  const auto curve = magnitude_curve(knot_values, length);
  std::vector<double> out(series.begin(), series.end());
  for (std::size_t t = 0; t < length; ++t) {
    for (std::size_t d = 0; d < dims; ++d) out[t * dims + d] *= curve[t];
  }
  return out;
}

inline std::size_t warped_window_length(std::size_t window, double scale) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(window) * scale)));
}

// Stretches [start, start + window) by `scale`, then resamples the whole
// series back to its original length.
inline std::vector<double> warp_window(std::span<const double> series, std::size_t dims, std::size_t start,
                                       std::size_t window, double scale) {
  const std::size_t length = series.size() / dims;
  const auto warped = resample_linear(series.subspan(start * dims, window * dims), dims,
                                      warped_window_length(window, scale));
  std::vector<double> joined(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(start * dims));
  joined.insert(joined.end(), warped.begin(), warped.end());
  joined.insert(joined.end(), series.begin() + static_cast<std::ptrdiff_t>((start + window) * dims),
                series.end());
  return resample_linear(joined, dims, length);
}

inline std::vector<double> warp_window_labels(std::span<const double> path, std::size_t start,
                                              std::size_t window, double scale) {
  const auto warped = resample_nearest(path.subspan(start, window), warped_window_length(window, scale));
  std::vector<double> joined(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(start));
  joined.insert(joined.end(), warped.begin(), warped.end());
  joined.insert(joined.end(), path.begin() + static_cast<std::ptrdiff_t>(start + window), path.end());
  return resample_nearest(joined, path.size());
}

// ---------------------------------------------------------------------------
// Augmentations.

namespace detail {

inline void check_n_new(std::size_t n_new) {
  if (n_new < 1) throw PreconditionError("n_new must be at least 1");
}

inline std::span<const double> path_or_empty(const Dataset& ds, std::size_t i) {
  return ds.has_temporal_labels() ? ds.temporal_path(i) : std::span<const double>{};
}

inline int class_or_zero(const Dataset& ds, std::size_t i) {
  return ds.has_static_labels() ? ds.static_labels()[i] : 0;
}

}  // namespace detail

inline Dataset gaussian_noise(const Dataset& ds, double sigma, std::size_t n_new, Seed seed) {
  detail::check_n_new(n_new);
  if (!(sigma >= 0.0)) throw PreconditionError("noise sigma must be >= 0");
  DatasetBuilder builder(ds);
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const auto src = static_cast<std::size_t>(rng.below(ds.n()));
    std::vector<double> out(ds.series(src).begin(), ds.series(src).end());
    for (double& v : out) v += sigma * rng.normal();
    builder.add(out, detail::class_or_zero(ds, src), detail::path_or_empty(ds, src));
  }
  return std::move(builder).build();
}

inline Dataset slice_and_shuffle(const Dataset& ds, std::size_t n_slices, std::size_t n_new, Seed seed) {
  detail::check_n_new(n_new);
  if (n_slices < 1 || n_slices > ds.length()) throw PreconditionError("n_slices must lie in [1, T]");
  DatasetBuilder builder(ds);
  const std::size_t length = ds.length();
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const auto src = static_cast<std::size_t>(rng.below(ds.n()));
    // n_slices - 1 distinct interior cut points from {1, ..., T-1}.
    std::vector<std::size_t> interior(length - 1);
    for (std::size_t k = 0; k + 1 < length; ++k) interior[k] = k + 1;
    for (std::size_t k = 0; k + 1 < n_slices; ++k) {
      const auto pick = k + static_cast<std::size_t>(rng.below(interior.size() - k));
      std::swap(interior[k], interior[pick]);
    }
    std::vector<std::size_t> cuts(interior.begin(), interior.begin() + static_cast<std::ptrdiff_t>(n_slices - 1));
    std::sort(cuts.begin(), cuts.end());
    const auto order = rng.permutation(n_slices);
    const auto out = shuffle_slices(ds.series(src), ds.dims(), cuts, order);
    std::vector<double> path;
    if (ds.has_temporal_labels()) path = shuffle_slices(ds.temporal_path(src), 1, cuts, order);
    builder.add(out, detail::class_or_zero(ds, src), path);
  }
  return std::move(builder).build();
}

// Flips every series of `ds` (no sampling).
inline Dataset flip_all(const Dataset& ds, FlipMode mode) {
  DatasetBuilder builder(ds);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    std::vector<double> path;
    if (ds.has_temporal_labels()) {
      path.assign(ds.temporal_path(i).begin(), ds.temporal_path(i).end());
      if (mode == FlipMode::time) std::reverse(path.begin(), path.end());
    }
    builder.add(flip_series(ds.series(i), ds.dims(), mode), detail::class_or_zero(ds, i), path);
  }
  return std::move(builder).build();
}

inline Dataset flip(const Dataset& ds, FlipMode mode, std::size_t n_new, Seed seed) {
  detail::check_n_new(n_new);
  DatasetBuilder builder(ds);
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const auto src = static_cast<std::size_t>(rng.below(ds.n()));
    std::vector<double> path;
    if (ds.has_temporal_labels()) {
      path.assign(ds.temporal_path(src).begin(), ds.temporal_path(src).end());
      if (mode == FlipMode::time) std::reverse(path.begin(), path.end());
    }
    builder.add(flip_series(ds.series(src), ds.dims(), mode), detail::class_or_zero(ds, src), path);
  }
  return std::move(builder).build();
}

inline Dataset magnitude_warp(const Dataset& ds, std::size_t n_knots, double sigma, std::size_t n_new,
                              Seed seed) {
  detail::check_n_new(n_new);
  if (n_knots < 2) throw PreconditionError("magnitude warp needs n_knots >= 2");
  if (!(sigma > 0.0)) throw PreconditionError("magnitude warp sigma must be > 0");
  DatasetBuilder builder(ds);
  std::vector<double> knots(n_knots);
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const auto src = static_cast<std::size_t>(rng.below(ds.n()));
    for (double& k : knots) k = rng.normal(1.0, sigma);
    builder.add(warp_magnitude(ds.series(src), ds.dims(), knots), detail::class_or_zero(ds, src),
                detail::path_or_empty(ds, src));
  }
  return std::move(builder).build();
}

inline Dataset window_warp(const Dataset& ds, double window_ratio, std::span<const double> scales,
                           std::size_t n_new, Seed seed) {
  detail::check_n_new(n_new);
  if (!(window_ratio > 0.0 && window_ratio < 1.0)) throw PreconditionError("window_ratio must lie in (0, 1)");
  if (scales.empty()) throw PreconditionError("window warp needs at least one scale");
  for (double s : scales) {
    if (!(s > 0.0)) throw PreconditionError("window warp scales must be positive");
  }
  const auto window = static_cast<std::size_t>(std::floor(window_ratio * static_cast<double>(ds.length())));
  if (window < 2) throw PreconditionError("window warp needs floor(window_ratio * T) >= 2");
  DatasetBuilder builder(ds);
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const auto src = static_cast<std::size_t>(rng.below(ds.n()));
    const auto start = static_cast<std::size_t>(rng.below(ds.length() - window + 1));
    const double scale = scales[rng.below(scales.size())];
    std::vector<double> path;
    if (ds.has_temporal_labels()) path = warp_window_labels(ds.temporal_path(src), start, window, scale);
    builder.add(warp_window(ds.series(src), ds.dims(), start, window, scale), detail::class_or_zero(ds, src),
                path);
  }
  return std::move(builder).build();
}

// reduce_ratio = 1 is accepted and gives exact copies.
inline Dataset window_slice(const Dataset& ds, double reduce_ratio, std::size_t n_new, Seed seed) {
  detail::check_n_new(n_new);
  if (!(reduce_ratio > 0.0 && reduce_ratio <= 1.0)) throw PreconditionError("reduce_ratio must lie in (0, 1]");
  const std::size_t length = ds.length();
  const auto window = static_cast<std::size_t>(std::floor(reduce_ratio * static_cast<double>(length)));
  if (window < 2) throw PreconditionError("window slice needs floor(reduce_ratio * T) >= 2");
  const std::size_t dims = ds.dims();
  DatasetBuilder builder(ds);
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const auto src = static_cast<std::size_t>(rng.below(ds.n()));
    const auto start = static_cast<std::size_t>(rng.below(length - window + 1));
    const auto out = resample_linear(ds.series(src).subspan(start * dims, window * dims), dims, length);
    std::vector<double> path;
    if (ds.has_temporal_labels()) path = resample_nearest(ds.temporal_path(src).subspan(start, window), length);
    builder.add(out, detail::class_or_zero(ds, src), path);
  }
  return std::move(builder).build();
}

}  // namespace tsforge::augment

#endif  // TSFORGE_AUGMENT_AUGMENTATIONS_HPP_
