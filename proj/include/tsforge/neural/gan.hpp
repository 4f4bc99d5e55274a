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

#ifndef TSFORGE_NEURAL_GAN_HPP_
#define TSFORGE_NEURAL_GAN_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/neural/adam.hpp"
#include "tsforge/neural/dense.hpp"
#include "tsforge/neural/vae.hpp"

namespace tsforge::neural {

/*
 * Generator: [z | c] -> T*D (sigmoid). Discriminator: [x | c] -> 1 logit;
 * the probability D(x) is sigmoid(logit), folded into the loss for
 * stability. The condition c is empty (unconditional), a one-hot class
 * vector (static labels) or the raw per-timestep label path (temporal).
 */
struct GanModel {
  DenseNet generator;
  DenseNet discriminator;
  std::size_t latent_dim = 0;
  LabelKind conditioning = LabelKind::none;
  std::size_t num_classes = 0;  // static conditioning only
  std::size_t length = 0;
  std::size_t dims = 0;
  Matrix condition_pool;  // training conditions, one row each

  std::size_t cond_dim() const {
    switch (conditioning) {
      case LabelKind::none: return 0;
      case LabelKind::static_class: return num_classes;
      case LabelKind::temporal: return length;
    }
    return 0;
  }

  void validate() const {
    if (latent_dim < 1) throw PreconditionError("latent_dim must be at least 1");
    if (conditioning == LabelKind::static_class && num_classes < 1) {
      throw PreconditionError("static conditioning needs at least one class");
    }
    if (generator.input_dim() != latent_dim + cond_dim() || generator.output_dim() != length * dims) {
      throw DimensionError("generator must map latent_dim + cond_dim inputs to T*D outputs");
    }
    if (discriminator.input_dim() != length * dims + cond_dim() || discriminator.output_dim() != 1) {
      throw DimensionError("discriminator must map T*D + cond_dim inputs to one output");
    }
  }

  bool operator==(const GanModel&) const = default;
};

struct GanArchitecture {
  std::size_t latent_dim = 8;
  std::vector<std::size_t> hidden = {64};
};

inline GanModel make_gan(std::size_t length, std::size_t dims, const GanArchitecture& arch, LabelKind conditioning,
                         std::size_t num_classes, Seed seed) {
  if (length * dims == 0) throw PreconditionError("GAN needs T*D >= 1");
  if (arch.latent_dim < 1) throw PreconditionError("latent_dim must be at least 1");
  GanModel m;
  m.latent_dim = arch.latent_dim;
  m.conditioning = conditioning;
  m.num_classes = conditioning == LabelKind::static_class ? num_classes : 0;
  m.length = length;
  m.dims = dims;
  Rng rng(seed);
  std::vector<std::size_t> g = {arch.latent_dim + m.cond_dim()};
  g.insert(g.end(), arch.hidden.begin(), arch.hidden.end());
  g.push_back(length * dims);
  std::vector<std::size_t> d = {length * dims + m.cond_dim()};
  d.insert(d.end(), arch.hidden.begin(), arch.hidden.end());
  d.push_back(1);
  m.generator = DenseNet::create(g, Activation::leaky_relu, Activation::sigmoid, rng);
  m.discriminator = DenseNet::create(d, Activation::leaky_relu, Activation::linear, rng);
  m.validate();
  return m;
}

// Condition rows for every series of `ds` under the model's conditioning.
inline Matrix conditions_for(const GanModel& model, const Dataset& ds) {
  const auto n = static_cast<Eigen::Index>(ds.n());
  if (ds.label_kind() != model.conditioning) {
    throw PreconditionError("dataset labels do not match the GAN conditioning");
  }
  switch (model.conditioning) {
    case LabelKind::none: return Matrix(n, 0);
    case LabelKind::static_class: {
      Matrix c = Matrix::Zero(n, static_cast<Eigen::Index>(model.num_classes));
      for (std::size_t i = 0; i < ds.n(); ++i) {
        const int y = ds.static_labels()[i];
        if (y < 0 || static_cast<std::size_t>(y) >= model.num_classes) {
          throw PreconditionError("class label " + std::to_string(y) + " outside [0, num_classes)");
        }
        c(static_cast<Eigen::Index>(i), y) = 1.0;
      }
      return c;
    }
    case LabelKind::temporal: {
      if (ds.length() != model.length) throw DimensionError("temporal label path length does not equal T");
      Matrix c(n, static_cast<Eigen::Index>(model.length));
      for (std::size_t i = 0; i < ds.n(); ++i) {
        const auto path = ds.temporal_path(i);
        for (std::size_t t = 0; t < path.size(); ++t) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = path[t];
      }
      return c;
    }
  }
  return Matrix(n, 0);
}

inline Matrix hconcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a;
  out.rightCols(b.cols()) = b;
  return out;
}

struct GanLoss {
  double loss = 0.0;
  NetGradients grads;  // discriminator grads for the D loss, generator grads for the G loss
};

// Mean binary cross-entropy over the concatenated batch, real labelled 1 and
// fake labelled 0; gradients are for the discriminator only.
inline GanLoss discriminator_loss(const GanModel& model, const Matrix& real, const Matrix& real_cond,
                                  const Matrix& fake, const Matrix& fake_cond) {
  const auto cd = static_cast<Eigen::Index>(model.cond_dim());
  if (real_cond.cols() != cd || fake_cond.cols() != cd || real_cond.rows() != real.rows() ||
      fake_cond.rows() != fake.rows()) {
    throw DimensionError("condition matrix does not match the GAN conditioning");
  }
  const double n = static_cast<double>(real.rows() + fake.rows());
  if (n == 0.0) throw PreconditionError("discriminator batch is empty");
  const ForwardCache r = forward_cached(model.discriminator, hconcat(real, real_cond));
  const ForwardCache f = forward_cached(model.discriminator, hconcat(fake, fake_cond));
  GanLoss out;
  Matrix dr(r.output.rows(), 1), df(f.output.rows(), 1);
  for (Eigen::Index i = 0; i < r.output.rows(); ++i) {
    out.loss += softplus(-r.output(i, 0));
    dr(i, 0) = -sigmoid(-r.output(i, 0)) / n;
  }
  for (Eigen::Index i = 0; i < f.output.rows(); ++i) {
    out.loss += softplus(f.output(i, 0));
    df(i, 0) = sigmoid(f.output(i, 0)) / n;
  }
  out.loss /= n;
  if (!std::isfinite(out.loss)) throw NumericError("discriminator loss is not finite");
  out.grads = backward(model.discriminator, r, dr);
  const NetGradients gf = backward(model.discriminator, f, df);
  for (std::size_t k = 0; k < gf.weights.size(); ++k) {
    out.grads.weights[k] += gf.weights[k];
    out.grads.biases[k] += gf.biases[k];
  }
  out.grads.input = Matrix();
  return out;
}

// Non-saturating generator loss -mean log D(G(z, c), c); gradients are for
// the generator only.
inline GanLoss generator_loss(const GanModel& model, const Matrix& z, const Matrix& cond) {
  const auto cd = static_cast<Eigen::Index>(model.cond_dim());
  if (z.cols() != static_cast<Eigen::Index>(model.latent_dim) || cond.cols() != cd || cond.rows() != z.rows()) {
    throw DimensionError("latent or condition matrix has the wrong shape");
  }
  if (z.rows() < 1) throw PreconditionError("generator batch is empty");
  const double b = static_cast<double>(z.rows());
  const ForwardCache g = forward_cached(model.generator, hconcat(z, cond));
  const ForwardCache d = forward_cached(model.discriminator, hconcat(g.output, cond));
  GanLoss out;
  Matrix dl(d.output.rows(), 1);
  for (Eigen::Index i = 0; i < d.output.rows(); ++i) {
    out.loss += softplus(-d.output(i, 0));
    dl(i, 0) = -sigmoid(-d.output(i, 0)) / b;
  }
  out.loss /= b;
  if (!std::isfinite(out.loss)) throw NumericError("generator loss is not finite");
  const NetGradients dg = backward(model.discriminator, d, dl);
  out.grads = backward(model.generator, g, dg.input.leftCols(static_cast<Eigen::Index>(model.length * model.dims)));
  return out;
}

struct GanTrainResult {
  GanModel model;
  std::vector<double> d_loss_history;  // mean per epoch
  std::vector<double> g_loss_history;
};

// Alternating updates per minibatch: one discriminator step on real versus
// freshly generated series (fakes reuse the batch's conditions), then one
// generator step with new noise.
inline GanTrainResult gan_train(GanModel model, const Dataset& ds, const TrainConfig& cfg, Seed seed) {
  model.validate();
  if (ds.length() != model.length || ds.dims() != model.dims) throw DimensionError("dataset shape does not match GAN");
  if (cfg.batch_size < 1) throw PreconditionError("batch_size must be at least 1");
  detail::require_unit_interval(ds);
  const Matrix data = flatten_series(ds);
  const Matrix conds = conditions_for(model, ds);
  model.condition_pool = conds;
  AdamState g_state(model.generator.param_count(), cfg.adam);
  AdamState d_state(model.discriminator.param_count(), cfg.adam);
  const auto latent = static_cast<Eigen::Index>(model.latent_dim);
  Rng rng(seed);
  GanTrainResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = rng.permutation(ds.n());
    double d_total = 0.0, g_total = 0.0;
    for (std::size_t start = 0; start < ds.n(); start += cfg.batch_size) {
      const std::size_t end = std::min(ds.n(), start + cfg.batch_size);
      const auto rows = std::span<const std::size_t>(order).subspan(start, end - start);
      const Matrix real = gather_rows(data, rows);
      const Matrix cond = gather_rows(conds, rows);
      const Matrix fake = forward(model.generator, hconcat(standard_normal_matrix(real.rows(), latent, rng), cond));
      const GanLoss dl = discriminator_loss(model, real, cond, fake, cond);
      adam_step(model.discriminator, dl.grads, d_state);
      const GanLoss gl = generator_loss(model, standard_normal_matrix(real.rows(), latent, rng), cond);
      adam_step(model.generator, gl.grads, g_state);
      d_total += dl.loss * static_cast<double>(end - start);
      g_total += gl.loss * static_cast<double>(end - start);
    }
    result.d_loss_history.push_back(d_total / static_cast<double>(ds.n()));
    result.g_loss_history.push_back(g_total / static_cast<double>(ds.n()));
  }
  result.model = std::move(model);
  return result;
}

inline GanTrainResult gan_train(GanModel model, const Dataset& ds, std::size_t epochs, std::size_t batch_size,
                                Seed seed) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  return gan_train(std::move(model), ds, cfg, seed);
}

// Generates n series. Without explicit conditions, condition rows are drawn
// uniformly from the training conditions. Conditions are attached as labels.
inline Dataset gan_generate(const GanModel& model, std::size_t n, const std::optional<Matrix>& conditions, Seed seed) {
  model.validate();
  if (n < 1) throw PreconditionError("n must be at least 1");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cd = static_cast<Eigen::Index>(model.cond_dim());
  Rng rng(seed);
  Matrix cond(rows, cd);
  if (conditions) {
    if (conditions->rows() != rows || conditions->cols() != cd) throw DimensionError("conditions must be [n, cond_dim]");
    cond = *conditions;
  } else if (cd > 0) {
    if (model.condition_pool.rows() == 0 || model.condition_pool.cols() != cd) {
      throw PreconditionError("conditional GAN has no training conditions to sample from");
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
      cond.row(i) = model.condition_pool.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(model.condition_pool.rows()))));
    }
  }
  const Matrix z = standard_normal_matrix(rows, static_cast<Eigen::Index>(model.latent_dim), rng);
  const Matrix x = forward(model.generator, hconcat(z, cond));
  if (!x.allFinite()) throw NumericError("generator produced non-finite values");
  const std::size_t width = model.length * model.dims;
  std::vector<double> values(n * width);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < width; ++k) values[i * width + k] = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
  }
  DatasetLabels labels;
  if (model.conditioning == LabelKind::static_class) {
    labels.static_labels = std::vector<int>(n);
    for (Eigen::Index i = 0; i < rows; ++i) {
      Eigen::Index arg = 0;
      cond.row(i).maxCoeff(&arg);
      (*labels.static_labels)[static_cast<std::size_t>(i)] = static_cast<int>(arg);
    }
  } else if (model.conditioning == LabelKind::temporal) {
    labels.temporal_labels = std::vector<double>(n * model.length);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index t = 0; t < cd; ++t) (*labels.temporal_labels)[static_cast<std::size_t>(i * cd + t)] = cond(i, t);
    }
  }
  return Dataset(n, model.length, model.dims, std::move(values), std::move(labels));
}

}  // namespace tsforge::neural

#endif  // TSFORGE_NEURAL_GAN_HPP_
