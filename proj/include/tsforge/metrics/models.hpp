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

#ifndef TSFORGE_METRICS_MODELS_HPP_
#define TSFORGE_METRICS_MODELS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"

namespace tsforge::metrics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

struct RidgeSolution {
  Matrix coefficients;  // [p, targets]
  RowVector intercept;  // [targets]
};

/*
 * Ridge regression with an unpenalized intercept, solved on centred data:
 *   (Xc'Xc / n + lambda I) B = Xc'Yc / n,  b0 = mean(Y) - mean(X) B.
 * Scaling by n makes the solution invariant to duplicating every row.
 */
inline RidgeSolution ridge_solve(const Matrix& x, const Matrix& y, double lambda) {
  if (x.rows() != y.rows()) throw DimensionError("ridge design and target row counts differ");
  if (x.rows() < 1) throw PreconditionError("ridge regression needs at least one example");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("ridge lambda must be finite and >= 0");
  const double n = static_cast<double>(x.rows());
  const RowVector x_mean = x.colwise().mean();
  const RowVector y_mean = y.colwise().mean();
  const Matrix xc = x.rowwise() - x_mean;
  const Matrix yc = y.rowwise() - y_mean;
  Matrix gram = xc.transpose() * xc / n;
  gram.diagonal().array() += lambda;
  const Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success || (lambda == 0.0 && ldlt.rcond() < 1e-14)) {
    throw NumericError("ridge normal equations are singular");
  }
  RidgeSolution s;
  s.coefficients = ldlt.solve(xc.transpose() * yc / n);
  if (!s.coefficients.allFinite()) throw NumericError("ridge solution is not finite");
  s.intercept = y_mean - x_mean * s.coefficients;
  return s;
}

// Lagged design matrix for one-step-ahead prediction: each row holds the w
// previous observations (all features, oldest first) and the target row
// holds x_t. Examples are pooled across series.
inline std::pair<Matrix, Matrix> autoregressive_examples(const Dataset& ds, std::size_t window) {
  if (window < 1) throw PreconditionError("autoregressive window must be at least 1");
  if (ds.length() <= window) {
    throw PreconditionError("series length " + std::to_string(ds.length()) + " is too short for window " +
                            std::to_string(window));
  }
  const std::size_t per_series = ds.length() - window;
  const auto rows = static_cast<Eigen::Index>(ds.n() * per_series);
  const auto d = static_cast<Eigen::Index>(ds.dims());
  Matrix x(rows, static_cast<Eigen::Index>(window) * d);
  Matrix y(rows, d);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto s = ds.series(i);
    for (std::size_t t = window; t < ds.length(); ++t, ++r) {
      for (std::size_t k = 0; k < window * ds.dims(); ++k) x(r, static_cast<Eigen::Index>(k)) = s[(t - window) * ds.dims() + k];
      for (std::size_t f = 0; f < ds.dims(); ++f) y(r, static_cast<Eigen::Index>(f)) = s[t * ds.dims() + f];
    }
  }
  return {std::move(x), std::move(y)};
}

// Ridge model predicting x_t from the previous `window` steps.
class RidgeAutoregressor {
 public:
  RidgeAutoregressor(std::size_t window, double lambda) : window_(window), lambda_(lambda) {
    if (window < 1) throw PreconditionError("autoregressive window must be at least 1");
    if (!(lambda >= 0.0)) throw DomainError("ridge lambda must be >= 0");
  }

  std::size_t window() const { return window_; }
  double lambda() const { return lambda_; }
  bool fitted() const { return fitted_; }

  void fit(const Dataset& ds) {
    const auto [x, y] = autoregressive_examples(ds, window_);
    solution_ = ridge_solve(x, y, lambda_);
    dims_ = ds.dims();
    fitted_ = true;
  }

  // [w*D + 1] coefficients for target feature d, intercept last.
  Vector coefficients(std::size_t d) const {
    require_fitted();
    Vector out(solution_.coefficients.rows() + 1);
    out.head(solution_.coefficients.rows()) = solution_.coefficients.col(static_cast<Eigen::Index>(d));
    out(out.size() - 1) = solution_.intercept(static_cast<Eigen::Index>(d));
    return out;
  }

  // Mean squared one-step error over all examples and features of `ds`.
  double mse(const Dataset& ds) const {
    require_fitted();
    if (ds.dims() != dims_) throw DimensionError("dataset feature count differs from the fitted model");
    const auto [x, y] = autoregressive_examples(ds, window_);
    const Matrix pred = (x * solution_.coefficients).rowwise() + solution_.intercept;
    return (pred - y).squaredNorm() / static_cast<double>(y.size());
  }

 private:
  void require_fitted() const {
    if (!fitted_) throw PreconditionError("model has not been fitted");
  }

  std::size_t window_;
  double lambda_;
  std::size_t dims_ = 0;
  bool fitted_ = false;
  RidgeSolution solution_;
};

// Rows are flattened series.
inline Matrix series_matrix(const Dataset& ds) {
  Matrix m(static_cast<Eigen::Index>(ds.n()), static_cast<Eigen::Index>(ds.series_size()));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto s = ds.series(i);
    for (std::size_t k = 0; k < s.size(); ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = s[k];
  }
  return m;
}

// One-vs-rest ridge classifier on flattened series (targets +1 / -1).
class RidgeClassifier {
 public:
  explicit RidgeClassifier(double lambda = 1.0) : lambda_(lambda) {}

  void fit(const Dataset& ds) {
    const auto& labels = ds.static_labels();
    classes_.assign(labels.begin(), labels.end());
    std::sort(classes_.begin(), classes_.end());
    classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
    if (classes_.size() < 2) throw PreconditionError("classifier needs at least two classes");
    Matrix y = -Matrix::Ones(static_cast<Eigen::Index>(ds.n()), static_cast<Eigen::Index>(classes_.size()));
    for (std::size_t i = 0; i < ds.n(); ++i) {
      const auto c = std::lower_bound(classes_.begin(), classes_.end(), labels[i]) - classes_.begin();
      y(static_cast<Eigen::Index>(i), c) = 1.0;
    }
    solution_ = ridge_solve(series_matrix(ds), y, lambda_);
    width_ = ds.series_size();
  }

  std::vector<int> predict(const Dataset& ds) const {
    if (classes_.empty()) throw PreconditionError("model has not been fitted");
    if (ds.series_size() != width_) throw DimensionError("series shape differs from the fitted model");
    const Matrix scores = (series_matrix(ds) * solution_.coefficients).rowwise() + solution_.intercept;
    std::vector<int> out(ds.n());
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      Eigen::Index best = 0;
      scores.row(i).maxCoeff(&best);
      out[static_cast<std::size_t>(i)] = classes_[static_cast<std::size_t>(best)];
    }
    return out;
  }

  double accuracy(const Dataset& ds) const {
    const auto pred = predict(ds);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ds.n(); ++i) hits += pred[i] == ds.static_labels()[i];
    return static_cast<double>(hits) / static_cast<double>(ds.n());
  }

 private:
  double lambda_;
  std::vector<int> classes_;
  std::size_t width_ = 0;
  RidgeSolution solution_;
};

struct KnnOccParams {
  std::size_t k = 1;
  double alpha = 0.95;
};

/*
 * One-class model: a point is in-class when its distance to the k-th
 * nearest reference point is at most the alpha-quantile of the reference
 * points' own k-th neighbour distances (self excluded).
 */
class KnnOcc {
 public:
  KnnOcc(const Matrix& reference, KnnOccParams params) : reference_(reference), params_(params) {
    const auto m = static_cast<std::size_t>(reference.rows());
    if (params.k < 1) throw PreconditionError("k must be at least 1");
    if (params.k >= m) {
      throw PreconditionError("k = " + std::to_string(params.k) + " must be smaller than the reference size " +
                              std::to_string(m));
    }
    if (!(params.alpha >= 0.0 && params.alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
    std::vector<double> self(m);
    for (std::size_t i = 0; i < m; ++i) self[i] = kth_distance(reference_.row(static_cast<Eigen::Index>(i)), i);
    std::sort(self.begin(), self.end());
    const double pos = params.alpha * static_cast<double>(m - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, m - 1);
    threshold_ = self[lo] + (pos - static_cast<double>(lo)) * (self[hi] - self[lo]);
  }

  double threshold() const { return threshold_; }

  double score(const RowVector& x) const { return kth_distance(x, static_cast<std::size_t>(-1)); }

  bool is_member(const RowVector& x) const { return score(x) <= threshold_; }

 private:
  double kth_distance(const RowVector& x, std::size_t skip) const {
    if (x.size() != reference_.cols()) throw DimensionError("point width differs from the reference set");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(reference_.rows()));
    for (Eigen::Index j = 0; j < reference_.rows(); ++j) {
      if (static_cast<std::size_t>(j) == skip) continue;
      d.push_back((reference_.row(j) - x).norm());
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(params_.k - 1), d.end());
    return d[params_.k - 1];
  }

  Matrix reference_;
  KnnOccParams params_;
  double threshold_ = 0.0;
};

}  // namespace tsforge::metrics

#endif  // TSFORGE_METRICS_MODELS_HPP_
