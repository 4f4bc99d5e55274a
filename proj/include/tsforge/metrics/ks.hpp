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

#ifndef TSFORGE_METRICS_KS_HPP_
#define TSFORGE_METRICS_KS_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "tsforge/core/error.hpp"

namespace tsforge::metrics {

// Two-sample Kolmogorov-Smirnov statistic sup_x |F_a(x) - F_b(x)|.
inline double ks_statistic(std::span<const double> sample_a, std::span<const double> sample_b) {
  if (sample_a.empty() || sample_b.empty()) throw PreconditionError("KS statistic needs two non-empty samples");
  std::vector<double> a(sample_a.begin(), sample_a.end());
  std::vector<double> b(sample_b.begin(), sample_b.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  std::size_t i = 0, j = 0;
  // |i/na - j/nb| is tracked as the integer |i*nb - j*na| so the result is
  // the correctly rounded rational. Both CDFs are evaluated just after each
  // distinct value, so ties between the samples are consumed together.
  std::size_t worst = 0;
  while (i < na && j < nb) {
    const double x = std::min(a[i], b[j]);
    while (i < na && a[i] == x) ++i;
    while (j < nb && b[j] == x) ++j;
    const std::size_t lhs = i * nb, rhs = j * na;
    worst = std::max(worst, lhs > rhs ? lhs - rhs : rhs - lhs);
  }
  return static_cast<double>(worst) / (static_cast<double>(na) * static_cast<double>(nb));
}

}  // namespace tsforge::metrics

#endif  // TSFORGE_METRICS_KS_HPP_
