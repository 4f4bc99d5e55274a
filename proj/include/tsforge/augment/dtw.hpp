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

#ifndef TSFORGE_AUGMENT_DTW_HPP_
#define TSFORGE_AUGMENT_DTW_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "tsforge/core/error.hpp"

namespace tsforge::augment {

// A [T, D] series laid out row-major (time-major), as stored in Dataset.
struct SeriesView {
  std::span<const double> values;
  std::size_t dims = 1;

  std::size_t length() const { return values.size() / dims; }
  std::span<const double> row(std::size_t t) const { return values.subspan(t * dims, dims); }
};

enum class PointDistance { squared_euclidean, euclidean };

inline double point_distance(std::span<const double> a, std::span<const double> b, PointDistance kind) {
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) acc += (a[d] - b[d]) * (a[d] - b[d]);
  return kind == PointDistance::euclidean ? std::sqrt(acc) : acc;
}

struct DtwResult {
  double cost = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> path;  // (index in a, index in b)
};

/*
 * Dynamic time warping with steps (1,0), (0,1), (1,1). Multivariate series
 * use one shared path with the pointwise distance taken over all features.
 * The path runs from (0,0) to (T1-1, T2-1); backtracking prefers the
 * diagonal, then the step from a, then the step from b.
 */
inline DtwResult dtw(SeriesView a, SeriesView b, PointDistance kind = PointDistance::squared_euclidean,
                     bool with_path = true) {
  if (a.dims != b.dims) throw DimensionError("dtw: series differ in feature count");
  const std::size_t n = a.length();
  const std::size_t m = b.length();
  if (n < 1 || m < 1) throw PreconditionError("dtw: series must be non-empty");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> acc(n * m, inf);
  auto at = [m, &acc](std::size_t i, std::size_t j) -> double& { return acc[i * m + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double cost = point_distance(a.row(i), b.row(j), kind);
      double best = 0.0;
      if (i > 0 || j > 0) {
        best = inf;
        if (i > 0 && j > 0) best = at(i - 1, j - 1);
        if (i > 0) best = std::min(best, at(i - 1, j));
        if (j > 0) best = std::min(best, at(i, j - 1));
      }
      at(i, j) = cost + best;
    }
  }
  DtwResult result;
  result.cost = at(n - 1, m - 1);
  if (!with_path) return result;
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  result.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = at(i - 1, j - 1);
      const double up = at(i - 1, j);
      const double left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    result.path.emplace_back(i, j);
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

}  // namespace tsforge::augment

#endif  // TSFORGE_AUGMENT_DTW_HPP_
