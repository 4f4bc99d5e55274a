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

#ifndef TSFORGE_NEURAL_ADAM_HPP_
#define TSFORGE_NEURAL_ADAM_HPP_

#include <cmath>
#include <cstddef>

#include "tsforge/core/error.hpp"
#include "tsforge/neural/dense.hpp"

namespace tsforge::neural {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;

  void validate() const {
    if (!(lr > 0.0) || !std::isfinite(lr)) throw PreconditionError("learning rate must be positive");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
      throw PreconditionError("Adam betas must lie in [0, 1)");
    }
    if (!(eps > 0.0)) throw PreconditionError("Adam eps must be positive");
  }
};

// Moments for one flat parameter vector.
struct AdamState {
  std::size_t step = 0;
  Vector m;
  Vector v;
  AdamConfig config;

  AdamState() = default;
  AdamState(std::size_t n_params, AdamConfig cfg)
      : m(Vector::Zero(static_cast<Eigen::Index>(n_params))),
        v(Vector::Zero(static_cast<Eigen::Index>(n_params))),
        config(cfg) {
    config.validate();
  }
};

// One bias-corrected Adam update of `params` in place.
inline void adam_step(Vector& params, const Vector& grads, AdamState& state) {
  if (grads.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw DimensionError("Adam parameter, gradient and moment sizes differ");
  }
  if (!grads.allFinite()) throw NumericError("non-finite gradient passed to Adam");
  const auto& c = state.config;
  ++state.step;
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * grads;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * grads.cwiseAbs2();
  const double step = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, step);
  const double bc2 = 1.0 - std::pow(c.beta2, step);
  params.array() -= c.lr * (state.m.array() / bc1) / ((state.v.array() / bc2).sqrt() + c.eps);
}

inline void adam_step(DenseNet& net, const NetGradients& grads, AdamState& state) {
  Vector p = net.flat_params();
  adam_step(p, grads.flat(), state);
  if (!p.allFinite()) throw NumericError("Adam produced non-finite parameters");
  net.set_flat_params(p);
}

}  // namespace tsforge::neural

#endif  // TSFORGE_NEURAL_ADAM_HPP_
