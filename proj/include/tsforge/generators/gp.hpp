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

#ifndef TSFORGE_GENERATORS_GP_HPP_
#define TSFORGE_GENERATORS_GP_HPP_

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"

namespace tsforge::generators {

// Relative jitter ladder: K + jitter * variance * I is tried in this order.
inline constexpr std::array<double, 3> kJitterLadder = {1e-10, 1e-8, 1e-6};

inline Eigen::MatrixXd rbf_kernel(std::size_t length, double lengthscale, double variance) {
  const auto n = static_cast<Eigen::Index>(length);
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double dt = static_cast<double>(a - b);
      k(a, b) = variance * std::exp(-dt * dt / (2.0 * lengthscale * lengthscale));
    }
  }
  return k;
}

struct GpCholesky {
  Eigen::MatrixXd lower;
  double jitter = 0.0;  // the ladder entry that succeeded
};

inline GpCholesky gp_cholesky(std::size_t length, double lengthscale, double variance) {
  const Eigen::MatrixXd k = rbf_kernel(length, lengthscale, variance);
  const auto n = static_cast<Eigen::Index>(length);
  for (double jitter : kJitterLadder) {
    Eigen::LLT<Eigen::MatrixXd> llt(k + jitter * variance * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) return {llt.matrixL(), jitter};
  }
  throw NumericError("RBF kernel Cholesky failed at every jitter level");
}

struct GpSample {
  Dataset data;
  double jitter = 0.0;
};

// Zero-mean GP draws on t = 0..T-1, independent per series and feature.
inline GpSample gp_sample(std::size_t n, std::size_t length, std::size_t dims, double lengthscale,
                          double variance, Seed seed) {
  if (n < 1 || length < 1 || dims < 1) throw PreconditionError("n, T and D must be at least 1");
  if (!(lengthscale > 0.0) || !(variance > 0.0)) {
    throw DomainError("lengthscale and variance must be positive");
  }
  const GpCholesky chol = gp_cholesky(length, lengthscale, variance);
  const auto t_len = static_cast<Eigen::Index>(length);
  std::vector<double> values(n * length * dims);
  Eigen::VectorXd z(t_len);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(derive_seed(seed, i));
    for (std::size_t d = 0; d < dims; ++d) {
      for (Eigen::Index t = 0; t < t_len; ++t) z(t) = rng.normal();
      const Eigen::VectorXd x = chol.lower * z;
      for (std::size_t t = 0; t < length; ++t) {
        values[(i * length + t) * dims + d] = x(static_cast<Eigen::Index>(t));
      }
    }
  }
  return {Dataset(n, length, dims, std::move(values)), chol.jitter};
}

}  // namespace tsforge::generators

#endif  // TSFORGE_GENERATORS_GP_HPP_
