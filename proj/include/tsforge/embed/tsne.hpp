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

#ifndef TSFORGE_EMBED_TSNE_HPP_
#define TSFORGE_EMBED_TSNE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/embed/embedding.hpp"

namespace tsforge::embed {

struct TsneConfig {
  double perplexity = 30.0;
  int n_iter = 1000;
  double learning_rate = 200.0;
  double momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iter = 250;
  double exaggeration = 12.0;
  int exaggeration_iters = 250;
  double init_std = 1e-4;
  double entropy_tol = 1e-5;
  int max_search_iters = 50;
  double min_gain = 0.01;

  void validate(Eigen::Index m) const {
    if (!(perplexity >= 2.0)) throw DomainError("perplexity must be at least 2");
    if (!(3.0 * perplexity < static_cast<double>(m))) {
      throw PreconditionError("perplexity is infeasible: need 3 * perplexity < number of points");
    }
    if (n_iter < 0) throw DomainError("n_iter must be >= 0");
    if (!(learning_rate > 0.0) || !(init_std > 0.0)) throw DomainError("learning rate and init std must be > 0");
  }
};

inline Matrix squared_distances(const Matrix& x) {
  const Vector sq = x.rowwise().squaredNorm();
  Matrix d = (-2.0 * x * x.transpose()).colwise() + sq;
  d.rowwise() += sq.transpose();
  d = d.cwiseMax(0.0);
  d.diagonal().setZero();
  return d;
}

struct ConditionalAffinities {
  Matrix p;         // row i holds p_{j|i}, zero diagonal
  Vector entropy;   // natural-log Shannon entropy of each row
  Vector beta;      // 1 / (2 sigma_i^2)
};

/*
 * Per-row Gaussian precision found by bisection (with doubling until the
 * target is bracketed) so that H(P_i) = log(perplexity). Distances are
 * shifted by the row minimum before exponentiating; entropy is unchanged.
 */
inline ConditionalAffinities conditional_affinities(const Matrix& sqdist, const TsneConfig& cfg) {
  const Eigen::Index m = sqdist.rows();
  const double target = std::log(cfg.perplexity);
  ConditionalAffinities out{Matrix::Zero(m, m), Vector::Zero(m), Vector::Zero(m)};
  std::vector<double> row(static_cast<std::size_t>(m - 1)), prob(row.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    double mean = 0.0, lowest = std::numeric_limits<double>::infinity();
    std::size_t c = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i) continue;
      row[c++] = sqdist(i, j);
      lowest = std::min(lowest, sqdist(i, j));
    }
    for (double& d : row) {
      d -= lowest;
      mean += d / static_cast<double>(row.size());
    }
    double beta = mean > 0.0 ? 1.0 / mean : 1.0;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    double h = 0.0;
    bool found = false;
    for (int it = 0; it < cfg.max_search_iters; ++it) {
      double sum = 0.0, weighted = 0.0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        prob[k] = std::exp(-beta * row[k]);
        sum += prob[k];
        weighted += row[k] * prob[k];
      }
      h = std::log(sum) + beta * weighted / sum;
      if (std::fabs(h - target) <= cfg.entropy_tol) {
        found = true;
        break;
      }
      if (h > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    if (!found) throw NumericError("perplexity is infeasible for the given points (bandwidth search failed)");
    double sum = 0.0;
    for (double v : prob) sum += v;
    c = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j != i) out.p(i, j) = prob[c++] / sum;
    }
    out.entropy(i) = h;
    out.beta(i) = beta;
  }
  return out;
}

// (P + P') normalized to sum 1, floored at 1e-12 off the diagonal, renormalized.
inline Matrix joint_affinities(const Matrix& conditional) {
  Matrix p = conditional + conditional.transpose();
  p /= p.sum();
  p = p.cwiseMax(1e-12);
  p.diagonal().setZero();
  p /= p.sum();
  return p;
}

struct TsneTrace {
  Matrix coords;
  std::vector<double> kl_history;  // KL(P || Q) with the unexaggerated P
  double max_entropy_error = 0.0;
};

/*
 * Exact t-SNE: gradient descent on KL(P || Q) with a Student-t Q, momentum,
 * early exaggeration and per-coordinate adaptive gains.
 */
inline TsneTrace tsne_run(const Matrix& points, const TsneConfig& cfg, Seed seed) {
  const Eigen::Index m = points.rows();
  cfg.validate(m);
  if (!points.allFinite()) throw NumericError("t-SNE input is not finite");
  const auto cond = conditional_affinities(squared_distances(points), cfg);
  const Matrix p = joint_affinities(cond.p);

  TsneTrace trace;
  trace.max_entropy_error = (cond.entropy.array() - std::log(cfg.perplexity)).abs().maxCoeff();

  Rng rng(seed);
  Matrix y(m, 2);
  for (Eigen::Index i = 0; i < m; ++i) {
    y(i, 0) = cfg.init_std * rng.normal();
    y(i, 1) = cfg.init_std * rng.normal();
  }
  Matrix velocity = Matrix::Zero(m, 2);
  Matrix gains = Matrix::Ones(m, 2);
  Matrix num(m, m);
  Matrix grad(m, 2);

  for (int it = 0; it < cfg.n_iter; ++it) {
    const double exaggeration = it < cfg.exaggeration_iters ? cfg.exaggeration : 1.0;
    const double momentum = it < cfg.momentum_switch_iter ? cfg.momentum : cfg.final_momentum;
    num = (1.0 + squared_distances(y).array()).inverse().matrix();
    num.diagonal().setZero();
    const double z = num.sum();

    // dC/dy_i = 4 sum_j (e p_ij - q_ij) num_ij (y_i - y_j)
    const Matrix w = ((exaggeration * p).array() - num.array() / z).matrix().cwiseProduct(num);
    const Vector wsum = w.rowwise().sum();
    grad = 4.0 * (wsum.asDiagonal() * y - w * y);

    double kl = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        if (i != j) kl += p(i, j) * std::log(p(i, j) * z / num(i, j));
      }
    }
    trace.kl_history.push_back(kl);

    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index k = 0; k < 2; ++k) {
        const bool same_sign = (grad(i, k) > 0.0) == (velocity(i, k) > 0.0);
        gains(i, k) = same_sign ? std::max(gains(i, k) * 0.8, cfg.min_gain) : gains(i, k) + 0.2;
      }
    }
    velocity = momentum * velocity - cfg.learning_rate * gains.cwiseProduct(grad);
    y += velocity;
    y.rowwise() -= y.colwise().mean();
    if (!y.allFinite()) throw NumericError("t-SNE layout diverged");
  }
  trace.coords = std::move(y);
  return trace;
}

inline EmbeddingResult tsne_embed(const Matrix& points, const TsneConfig& cfg, Seed seed,
                                  std::vector<SourceTag> tags = {}) {
  auto trace = tsne_run(points, cfg, seed);
  EmbeddingResult r;
  r.source_tags = detail::tags_or_default(std::move(tags), points.rows());
  r.coords = std::move(trace.coords);
  r.method = EmbedMethod::tsne;
  r.diagnostics["kl"] = trace.kl_history.empty() ? std::numeric_limits<double>::quiet_NaN() : trace.kl_history.back();
  r.diagnostics["perplexity"] = cfg.perplexity;
  r.diagnostics["n_iter"] = cfg.n_iter;
  r.diagnostics["max_entropy_error"] = trace.max_entropy_error;
  if (trace.kl_history.empty()) r.diagnostics.erase("kl");
  return r;
}

}  // namespace tsforge::embed

#endif  // TSFORGE_EMBED_TSNE_HPP_
