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

#ifndef TSFORGE_NEURAL_VAE_HPP_
#define TSFORGE_NEURAL_VAE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/neural/adam.hpp"
#include "tsforge/neural/dense.hpp"

namespace tsforge::neural {

struct VaeModel {
  DenseNet encoder;  // T*D -> 2*latent_dim (mu, then log sigma^2)
  DenseNet decoder;  // latent_dim -> T*D
  double beta = 1.0;
  std::size_t latent_dim = 0;
  std::size_t length = 0;
  std::size_t dims = 0;

  void validate() const {
    if (latent_dim < 1) throw PreconditionError("latent_dim must be at least 1");
    if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
    if (encoder.input_dim() != length * dims || encoder.output_dim() != 2 * latent_dim) {
      throw DimensionError("encoder must map T*D inputs to 2*latent_dim outputs");
    }
    if (decoder.input_dim() != latent_dim || decoder.output_dim() != length * dims) {
      throw DimensionError("decoder must map latent_dim inputs to T*D outputs");
    }
  }

  bool operator==(const VaeModel&) const = default;
};

struct VaeArchitecture {
  std::size_t latent_dim = 8;
  std::vector<std::size_t> hidden = {64};
  double beta = 1.0;
};

inline VaeModel make_vae(std::size_t length, std::size_t dims, const VaeArchitecture& arch, Seed seed) {
  if (length * dims == 0) throw PreconditionError("VAE needs T*D >= 1");
  Rng rng(seed);
  VaeModel m;
  m.latent_dim = arch.latent_dim;
  m.beta = arch.beta;
  m.length = length;
  m.dims = dims;
  if (arch.latent_dim < 1) throw PreconditionError("latent_dim must be at least 1");
  std::vector<std::size_t> enc = {length * dims};
  enc.insert(enc.end(), arch.hidden.begin(), arch.hidden.end());
  enc.push_back(2 * arch.latent_dim);
  std::vector<std::size_t> dec = {arch.latent_dim};
  dec.insert(dec.end(), arch.hidden.rbegin(), arch.hidden.rend());
  dec.push_back(length * dims);
  m.encoder = DenseNet::create(enc, Activation::leaky_relu, Activation::linear, rng);
  m.decoder = DenseNet::create(dec, Activation::leaky_relu, Activation::sigmoid, rng);
  m.validate();
  return m;
}

struct VaeLoss {
  double loss = 0.0;   // recon + beta * kl
  double recon = 0.0;  // per-datum sum of squared errors, batch mean
  double kl = 0.0;     // per-datum KL to N(0, I), batch mean
  NetGradients encoder;
  NetGradients decoder;
};

// Closed-form KL(N(mu, diag exp(logvar)) || N(0, I)) for one row.
inline double gaussian_kl(const RowVector& mu, const RowVector& logvar) {
  return 0.5 * (logvar.array().exp() + mu.array().square() - 1.0 - logvar.array()).sum();
}

// Loss and exact gradients for a fixed reparameterization noise matrix
// `noise` of shape [B, latent_dim].
inline VaeLoss vae_loss_with_noise(const VaeModel& model, const Matrix& batch, const Matrix& noise) {
  const auto b = batch.rows();
  const auto l = static_cast<Eigen::Index>(model.latent_dim);
  if (b < 1) throw PreconditionError("VAE batch is empty");
  if (static_cast<std::size_t>(batch.cols()) != model.length * model.dims) {
    throw DimensionError("VAE batch width does not equal T*D");
  }
  if (noise.rows() != b || noise.cols() != l) throw DimensionError("noise must be [B, latent_dim]");
  if (!batch.allFinite()) throw NumericError("VAE batch contains non-finite values");

  const ForwardCache enc = forward_cached(model.encoder, batch);
  const Matrix mu = enc.output.leftCols(l);
  const Matrix logvar = enc.output.rightCols(l);
  const Matrix sigma = (0.5 * logvar.array()).exp().matrix();
  const Matrix z = mu + sigma.cwiseProduct(noise);
  const ForwardCache dec = forward_cached(model.decoder, z);
  const Matrix diff = dec.output - batch;

  const double inv_b = 1.0 / static_cast<double>(b);
  VaeLoss out;
  out.recon = diff.squaredNorm() * inv_b;
  out.kl = 0.5 * (sigma.array().square() + mu.array().square() - 1.0 - logvar.array()).sum() * inv_b;
  out.loss = out.recon + model.beta * out.kl;
  if (!std::isfinite(out.loss)) throw NumericError("VAE loss is not finite");

  out.decoder = backward(model.decoder, dec, 2.0 * inv_b * diff);
  const Matrix& dz = out.decoder.input;
  Matrix upstream(b, 2 * l);
  upstream.leftCols(l) = dz + model.beta * inv_b * mu;
  upstream.rightCols(l) = (dz.array() * noise.array() * 0.5 * sigma.array() +
                           model.beta * inv_b * 0.5 * (sigma.array().square() - 1.0))
                              .matrix();
  out.encoder = backward(model.encoder, enc, upstream);
  return out;
}

inline Matrix standard_normal_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

inline VaeLoss vae_loss(const VaeModel& model, const Matrix& batch, Seed seed) {
  Rng rng(seed);
  return vae_loss_with_noise(model, batch,
                             standard_normal_matrix(batch.rows(), static_cast<Eigen::Index>(model.latent_dim), rng));
}

// Rows of the returned matrix are the flattened series of `ds`.
inline Matrix flatten_series(const Dataset& ds) {
  Matrix m(static_cast<Eigen::Index>(ds.n()), static_cast<Eigen::Index>(ds.series_size()));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    const auto s = ds.series(i);
    for (std::size_t k = 0; k < s.size(); ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = s[k];
  }
  return m;
}

inline Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
  return out;
}

namespace detail {

inline void require_unit_interval(const Dataset& ds) {
  for (double v : ds.values()) {
    if (v < 0.0 || v > 1.0) throw PreconditionError("training data must be min-max scaled to [0, 1]");
  }
}

}  // namespace detail

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 64;
  AdamConfig adam;
};

struct VaeTrainResult {
  VaeModel model;
  std::vector<double> loss_history;  // mean batch loss per epoch
};

inline VaeTrainResult vae_train(VaeModel model, const Dataset& ds, const TrainConfig& cfg, Seed seed) {
  model.validate();
  if (ds.length() != model.length || ds.dims() != model.dims) throw DimensionError("dataset shape does not match VAE");
  if (cfg.batch_size < 1) throw PreconditionError("batch_size must be at least 1");
  detail::require_unit_interval(ds);
  const Matrix data = flatten_series(ds);
  AdamState enc_state(model.encoder.param_count(), cfg.adam);
  AdamState dec_state(model.decoder.param_count(), cfg.adam);
  Rng rng(seed);
  VaeTrainResult result;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto order = rng.permutation(ds.n());
    double total = 0.0;
    for (std::size_t start = 0; start < ds.n(); start += cfg.batch_size) {
      const std::size_t end = std::min(ds.n(), start + cfg.batch_size);
      const Matrix batch = gather_rows(data, std::span<const std::size_t>(order).subspan(start, end - start));
      const Matrix noise = standard_normal_matrix(batch.rows(), static_cast<Eigen::Index>(model.latent_dim), rng);
      const VaeLoss loss = vae_loss_with_noise(model, batch, noise);
      adam_step(model.encoder, loss.encoder, enc_state);
      adam_step(model.decoder, loss.decoder, dec_state);
      total += loss.loss * static_cast<double>(end - start);
    }
    result.loss_history.push_back(total / static_cast<double>(ds.n()));
  }
  result.model = std::move(model);
  return result;
}

inline VaeTrainResult vae_train(VaeModel model, const Dataset& ds, std::size_t epochs, std::size_t batch_size,
                                Seed seed) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  return vae_train(std::move(model), ds, cfg, seed);
}

// Decodes z ~ N(0, I) into n series of shape [T, D].
inline Dataset vae_generate(const VaeModel& model, std::size_t n, Seed seed) {
  model.validate();
  if (n < 1) throw PreconditionError("n must be at least 1");
  Rng rng(seed);
  const Matrix z = standard_normal_matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(model.latent_dim), rng);
  const Matrix x = forward(model.decoder, z);
  if (!x.allFinite()) throw NumericError("decoder produced non-finite values");
  std::vector<double> values(n * model.length * model.dims);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < model.length * model.dims; ++k) {
      values[i * model.length * model.dims + k] = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    }
  }
  return Dataset(n, model.length, model.dims, std::move(values));
}

}  // namespace tsforge::neural

#endif  // TSFORGE_NEURAL_VAE_HPP_
