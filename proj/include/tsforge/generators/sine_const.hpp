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

#ifndef TSFORGE_GENERATORS_SINE_CONST_HPP_
#define TSFORGE_GENERATORS_SINE_CONST_HPP_

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"

namespace tsforge::generators {

/*
 * Temporally labelled sine/constant process. Each series carries a 0/1
 * label path y_t: a two-state Markov chain that flips with probability
 * `switch_prob` at every step, starting from a fair coin (or from
 * `initial_state` when set). Every feature draws an amplitude
 * s ~ Uniform(0, max_scale] and a phase C ~ Uniform(0, 2*pi) and emits
 *
 *   x_t = s * sin(t + C)   when y_t = 1
 *   x_t = s                when y_t = 0
 *
 * With `const_from_max_const` the y_t = 0 level is instead an independent
 * draw c ~ Uniform(0, max_const] per feature.
 */
struct SineConstParams {
  double max_scale = 1.0;
  double max_const = 1.0;
  double switch_prob = 0.1;
  bool const_from_max_const = false;
  std::optional<int> initial_state;
};

inline Dataset sine_const_generate(const SineConstParams& p, std::size_t n, std::size_t length,
                                   std::size_t dims, Seed seed) {
  if (n < 1 || length < 1 || dims < 1) throw PreconditionError("n, T and D must be at least 1");
  if (!(p.max_scale > 0.0) || !(p.max_const > 0.0)) {
    throw DomainError("max_scale and max_const must be positive");
  }
  if (!(p.switch_prob >= 0.0 && p.switch_prob <= 1.0)) {
    throw DomainError("switch_prob must lie in [0, 1]");
  }
  std::vector<double> values(n * length * dims);
  std::vector<double> labels(n * length);
  std::vector<double> scale(dims);
  std::vector<double> phase(dims);
  std::vector<double> level(dims);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    int state = p.initial_state ? (*p.initial_state != 0 ? 1 : 0) : (rng.bernoulli(0.5) ? 1 : 0);
    for (std::size_t t = 0; t < length; ++t) {
      if (t > 0 && rng.bernoulli(p.switch_prob)) state = 1 - state;
      labels[i * length + t] = state;
    }
    for (std::size_t d = 0; d < dims; ++d) {
      scale[d] = p.max_scale * rng.uniform_open_zero();
      phase[d] = 2.0 * std::numbers::pi * rng.uniform();
      level[d] = p.const_from_max_const ? p.max_const * rng.uniform_open_zero() : scale[d];
    }
    for (std::size_t t = 0; t < length; ++t) {
      const bool periodic = labels[i * length + t] == 1.0;
      for (std::size_t d = 0; d < dims; ++d) {
        values[(i * length + t) * dims + d] =
            periodic ? scale[d] * std::sin(static_cast<double>(t) + phase[d]) : level[d];
      }
    }
  }
  DatasetLabels dl;
  dl.temporal_labels = std::move(labels);
  return Dataset(n, length, dims, std::move(values), std::move(dl));
}

}  // namespace tsforge::generators

#endif  // TSFORGE_GENERATORS_SINE_CONST_HPP_
