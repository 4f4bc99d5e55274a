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

#ifndef TSFORGE_EMBED_PERIODOGRAM_HPP_
#define TSFORGE_EMBED_PERIODOGRAM_HPP_

#include <ostream>
#include <vector>

#include "tsforge/core/csv.hpp"
#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/spectral.hpp"

namespace tsforge::embed {

/*
 * One-sided power spectrum as a Dataset of shape [N, floor(T/2)+1, D]:
 * bin k holds |X_k / T|^2, doubled for bins whose negative-frequency twin
 * was folded in (0 < k < T/2). Bins then sum to the mean of x_t^2.
 */
inline Dataset periodogram(const Dataset& ds) {
  if (ds.length() < 2) throw PreconditionError("periodogram needs T >= 2");
  const DftTable table(ds.length());
  const std::size_t bins = table.n_bins();
  const double t = static_cast<double>(ds.length());
  std::vector<double> values(ds.n() * bins * ds.dims());
  std::vector<double> power(bins);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto series = ds.series(i);
    for (std::size_t d = 0; d < ds.dims(); ++d) {
      table.periodogram(series.subspan(d), ds.dims(), power);
      for (std::size_t k = 0; k < bins; ++k) {
        const bool folded = k > 0 && 2 * k != ds.length();
        values[(i * bins + k) * ds.dims() + d] = power[k] / t * (folded ? 2.0 : 1.0);
      }
    }
  }
  return Dataset(ds.n(), bins, ds.dims(), std::move(values), {}, ds.feature_names());
}

// Series-averaged spectra of real and synthetic data in long format.
inline void write_spectrum_csv(std::ostream& out, const Dataset& real, const Dataset& synth) {
  if (real.length() != synth.length() || real.dims() != synth.dims()) {
    throw DimensionError("real and synthetic shapes differ");
  }
  const Dataset pr = periodogram(real);
  const Dataset ps = periodogram(synth);
  out << "bin,feature,real,synthetic\n";
  for (std::size_t k = 0; k < pr.length(); ++k) {
    for (std::size_t d = 0; d < pr.dims(); ++d) {
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < pr.n(); ++i) a += pr(i, k, d);
      for (std::size_t i = 0; i < ps.n(); ++i) b += ps(i, k, d);
      out << k << ',' << pr.feature_names()[d] << ',' << csv::format_real(a / static_cast<double>(pr.n())) << ','
          << csv::format_real(b / static_cast<double>(ps.n())) << '\n';
    }
  }
}

}  // namespace tsforge::embed

#endif  // TSFORGE_EMBED_PERIODOGRAM_HPP_
