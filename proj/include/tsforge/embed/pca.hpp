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

#ifndef TSFORGE_EMBED_PCA_HPP_
#define TSFORGE_EMBED_PCA_HPP_

#include <cmath>
#include <vector>

#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/embed/embedding.hpp"

namespace tsforge::embed {

struct PrincipalComponents {
  Matrix directions;     // [P, k], orthonormal columns
  Vector eigenvalues;    // [k]
  double total_variance = 0.0;
  RowVector mean;
};

struct PcaConfig {
  double tolerance = 1e-10;  // relative change of the Rayleigh quotient
  int max_iterations = 1000;
};

/*
 * Top-k principal directions of the sample covariance by power iteration.
 * Each iterate is projected off the directions already found (deflation),
 * which also keeps the columns orthonormal to rounding.
 */
inline PrincipalComponents principal_components(const Matrix& points, Eigen::Index k, const PcaConfig& cfg = {}) {
  if (points.rows() < 2) throw PreconditionError("PCA needs at least two points");
  if (k < 1 || k > points.cols()) throw PreconditionError("component count must lie in [1, P]");
  if (!points.allFinite()) throw NumericError("PCA input is not finite");
  PrincipalComponents pc;
  pc.mean = points.colwise().mean();
  const Matrix centered = points.rowwise() - pc.mean;
  const Matrix cov = centered.transpose() * centered / static_cast<double>(points.rows() - 1);
  pc.total_variance = cov.trace();
  pc.directions = Matrix::Zero(points.cols(), k);
  pc.eigenvalues = Vector::Zero(k);
  const double negligible = 1e-14 * std::max(pc.total_variance, 1e-300);

  Rng rng(Seed{0x9ca});
  auto deflate = [&](Vector& v, Eigen::Index found) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < found; ++j) v -= pc.directions.col(j).dot(v) * pc.directions.col(j);
    }
  };

  for (Eigen::Index c = 0; c < k; ++c) {
    Vector v(points.cols());
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = rng.normal();
    deflate(v, c);
    v.normalize();
    double lambda = v.dot(cov * v);
    bool converged = false;
    for (int it = 0; it < cfg.max_iterations; ++it) {
      Vector w = cov * v;
      deflate(w, c);
      const double norm = w.norm();
      if (norm <= negligible) {
        // Remaining variance is zero; any orthogonal unit vector will do.
        lambda = 0.0;
        converged = true;
        break;
      }
      v = w / norm;
      const double next = v.dot(cov * v);
      const bool done = std::fabs(next - lambda) <= cfg.tolerance * std::max(std::fabs(next), negligible);
      lambda = next;
      if (done) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericError("PCA power iteration did not converge");
    pc.directions.col(c) = v;
    pc.eigenvalues(c) = std::max(lambda, 0.0);
  }
  return pc;
}

// 2-D PCA layout; diagnostics hold the explained-variance fractions.
inline EmbeddingResult pca_embed(const Matrix& points, std::vector<SourceTag> tags = {}, const PcaConfig& cfg = {}) {
  if (points.cols() < 2) throw PreconditionError("PCA embedding needs at least two input dimensions");
  const auto pc = principal_components(points, 2, cfg);
  EmbeddingResult r;
  r.coords = (points.rowwise() - pc.mean) * pc.directions;
  r.source_tags = detail::tags_or_default(std::move(tags), points.rows());
  r.method = EmbedMethod::pca;
  const double total = pc.total_variance;
  r.diagnostics["explained_variance_1"] = total > 0.0 ? pc.eigenvalues(0) / total : 0.0;
  r.diagnostics["explained_variance_2"] = total > 0.0 ? pc.eigenvalues(1) / total : 0.0;
  return r;
}

}  // namespace tsforge::embed

#endif  // TSFORGE_EMBED_PCA_HPP_
