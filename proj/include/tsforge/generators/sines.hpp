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

#ifndef TSFORGE_GENERATORS_SINES_HPP_
#define TSFORGE_GENERATORS_SINES_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"

namespace tsforge::generators {

// Unlabelled sinusoids x_t = sin(f t + phi) with f ~ U(0, max_frequency)
// and phi ~ U(0, max_phase) drawn per series and feature.
struct SinesParams {
  double max_frequency = 0.1;
  double max_phase = 0.1;
};

inline Dataset sines_generate(const SinesParams& p, std::size_t n, std::size_t length, std::size_t dims, Seed seed) {
  if (n < 1 || length < 1 || dims < 1) throw PreconditionError("sines require n, T, D >= 1");
  if (!(p.max_frequency > 0.0) || !(p.max_phase >= 0.0)) throw DomainError("sines need max_frequency > 0, max_phase >= 0");
  std::vector<double> values(n * length * dims);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    for (std::size_t d = 0; d < dims; ++d) {
      const double f = rng.uniform(0.0, p.max_frequency);
      const double phi = rng.uniform(0.0, p.max_phase);
      for (std::size_t t = 0; t < length; ++t) {
        values[(i * length + t) * dims + d] = std::sin(f * static_cast<double>(t) + phi);
      }
    }
  }
  return Dataset(n, length, dims, std::move(values));
}

}  // namespace tsforge::generators

#endif  // TSFORGE_GENERATORS_SINES_HPP_
