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

#ifndef TSFORGE_AUGMENT_DBA_HPP_
#define TSFORGE_AUGMENT_DBA_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "tsforge/augment/dtw.hpp"
#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"

namespace tsforge::augment {

struct DbaResult {
  std::vector<double> barycenter;   // [T, D] of the initial member's length
  std::vector<double> cost_history;  // weighted total cost, before and after each iteration
};

inline double weighted_dtw_cost(std::span<const double> barycenter, std::span<const SeriesView> members,
                                std::span<const double> weights, std::size_t dims) {
  double total = 0.0;
  const SeriesView center{barycenter, dims};
  for (std::size_t m = 0; m < members.size(); ++m) {
    total += weights[m] * dtw(center, members[m], PointDistance::squared_euclidean, false).cost;
  }
  return total;
}

/*
 * Weighted DTW barycenter averaging under squared-Euclidean DTW. Starts from
 * members[init_index]; every iteration aligns each member to the current
 * barycenter and replaces barycenter point i by the weighted mean of all
 * member points aligned to it. The weighted total cost never increases.
 */
inline DbaResult dba(std::span<const SeriesView> members, std::span<const double> weights,
                     std::size_t init_index, std::size_t n_iters) {
  if (members.empty() || members.size() != weights.size()) {
    throw DimensionError("dba: need one weight per member");
  }
  if (init_index >= members.size()) throw PreconditionError("dba: init index out of range");
  const std::size_t dims = members[0].dims;
  DbaResult result;
  result.barycenter.assign(members[init_index].values.begin(), members[init_index].values.end());
  const std::size_t length = members[init_index].length();
  result.cost_history.push_back(weighted_dtw_cost(result.barycenter, members, weights, dims));
  std::vector<double> sum(length * dims);
  std::vector<double> mass(length);
  // Coordinates whose aligned points all agree are copied, not averaged, so
  // that rounding cannot move them.
  std::vector<double> first(length * dims);
  std::vector<char> uniform(length * dims);
  for (std::size_t it = 0; it < n_iters; ++it) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(mass.begin(), mass.end(), 0.0);
    std::fill(uniform.begin(), uniform.end(), 2);  // 2: nothing seen yet
    const SeriesView center{result.barycenter, dims};
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (weights[m] == 0.0) continue;
      const auto aligned = dtw(center, members[m], PointDistance::squared_euclidean, true);
      for (const auto& [i, j] : aligned.path) {
        const auto point = members[m].row(j);
        for (std::size_t d = 0; d < dims; ++d) {
          const std::size_t k = i * dims + d;
          sum[k] += weights[m] * point[d];
          if (uniform[k] == 2) {
            first[k] = point[d];
            uniform[k] = 1;
          } else if (first[k] != point[d]) {
            uniform[k] = 0;
          }
        }
        mass[i] += weights[m];
      }
    }
    for (std::size_t i = 0; i < length; ++i) {
      if (mass[i] <= 0.0) continue;  // zero total weight leaves the point in place
      for (std::size_t d = 0; d < dims; ++d) {
        const std::size_t k = i * dims + d;
        result.barycenter[k] = uniform[k] == 1 ? first[k] : sum[k] / mass[i];
      }
    }
    result.cost_history.push_back(weighted_dtw_cost(result.barycenter, members, weights, dims));
  }
  return result;
}

struct DtwbaParams {
  std::size_t n_iters = 10;
  std::size_t n_neighbors = 5;
};

/*
 * DBA augmentation. For each new series: a reference drawn uniformly among
 * series whose class has at least two members gets weight 0.5; its k nearest
 * class-mates by DTW share the other 0.5 in proportion to exp(-dtw / tau),
 * tau being the median pairwise DTW cost inside the class (equal shares when
 * tau is 0). The barycenter starts at the reference and inherits its label.
 */
inline Dataset dtwba(const Dataset& ds, std::size_t n_new, const DtwbaParams& params, Seed seed) {
  if (n_new < 1) throw PreconditionError("n_new must be at least 1");
  if (params.n_iters < 1) throw PreconditionError("dtwba needs at least one iteration");
  if (params.n_neighbors < 1) throw PreconditionError("dtwba needs at least one neighbour");
  if (ds.n() < 2) throw PreconditionError("dtwba needs at least two series");

  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    groups[ds.has_static_labels() ? ds.static_labels()[i] : 0].push_back(i);
  }
  std::vector<std::size_t> eligible;
  for (const auto& [label, members] : groups) {
    if (members.size() >= 2) eligible.insert(eligible.end(), members.begin(), members.end());
  }
  if (eligible.empty()) throw PreconditionError("dtwba needs at least two series in some class");
  std::sort(eligible.begin(), eligible.end());

  const std::size_t dims = ds.dims();
  auto view = [&](std::size_t i) { return SeriesView{ds.series(i), dims}; };

  // Pairwise costs and median per class, filled on first use.
  struct GroupCache {
    std::vector<double> costs;  // |g| x |g|
    double tau = 0.0;
    bool ready = false;
  };
  std::map<int, GroupCache> cache;
  auto group_cache = [&](int label) -> const GroupCache& {
    GroupCache& gc = cache[label];
    if (gc.ready) return gc;
    const auto& members = groups.at(label);
    const std::size_t g = members.size();
    gc.costs.assign(g * g, 0.0);
    std::vector<double> off_diagonal;
    for (std::size_t a = 0; a < g; ++a) {
      for (std::size_t b = a + 1; b < g; ++b) {
        const double c = dtw(view(members[a]), view(members[b]), PointDistance::squared_euclidean, false).cost;
        gc.costs[a * g + b] = c;
        gc.costs[b * g + a] = c;
        off_diagonal.push_back(c);
      }
    }
    std::sort(off_diagonal.begin(), off_diagonal.end());
    const std::size_t h = off_diagonal.size();
    gc.tau = h % 2 == 1 ? off_diagonal[h / 2] : 0.5 * (off_diagonal[h / 2 - 1] + off_diagonal[h / 2]);
    gc.ready = true;
    return gc;
  };

  DatasetBuilder builder(ds);
  for (std::size_t j = 0; j < n_new; ++j) {
    Rng rng(derive_seed(seed, j));
    const std::size_t reference = eligible[rng.below(eligible.size())];
    const int label = ds.has_static_labels() ? ds.static_labels()[reference] : 0;
    const auto& members = groups.at(label);
    const GroupCache& gc = group_cache(label);
    const std::size_t g = members.size();
    const std::size_t ref_pos =
        static_cast<std::size_t>(std::find(members.begin(), members.end(), reference) - members.begin());

    std::vector<std::size_t> others;
    for (std::size_t b = 0; b < g; ++b) {
      if (b != ref_pos) others.push_back(b);
    }
    std::stable_sort(others.begin(), others.end(), [&](std::size_t x, std::size_t y) {
      return gc.costs[ref_pos * g + x] < gc.costs[ref_pos * g + y];
    });
    const std::size_t k = std::min(params.n_neighbors, others.size());

    std::vector<SeriesView> chosen{view(reference)};
    std::vector<double> weights{0.5};
    std::vector<double> raw(k);
    double raw_sum = 0.0;
    for (std::size_t q = 0; q < k; ++q) {
      const double c = gc.costs[ref_pos * g + others[q]];
      raw[q] = gc.tau > 0.0 ? std::exp(-c / gc.tau) : 1.0;
      raw_sum += raw[q];
    }
    for (std::size_t q = 0; q < k; ++q) {
      chosen.push_back(view(members[others[q]]));
      weights.push_back(raw_sum > 0.0 ? 0.5 * raw[q] / raw_sum : 0.5 / static_cast<double>(k));
    }
    const DbaResult bary = dba(chosen, weights, 0, params.n_iters);
    builder.add(bary.barycenter, label,
                ds.has_temporal_labels() ? ds.temporal_path(reference) : std::span<const double>{});
  }
  return std::move(builder).build();
}

}  // namespace tsforge::augment

#endif  // TSFORGE_AUGMENT_DBA_HPP_
