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

// Central finite-difference oracles for the hand-written gradients, shared
// by the unit tests and the acceptance suite.

#ifndef TSFORGE_TESTS_GRADIENT_CHECK_HPP_
#define TSFORGE_TESTS_GRADIENT_CHECK_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "tsforge/neural/gan.hpp"
#include "tsforge/neural/vae.hpp"

namespace tsforge::testing {

using neural::Activation;
using neural::DenseNet;
using neural::Matrix;
using neural::Vector;

inline constexpr double kFiniteDifferenceStep = 1e-5;
// Components smaller than this are compared in absolute terms.
inline constexpr double kRelativeFloor = 1e-6;

inline double max_relative_error(const Vector& analytic, const Vector& numeric) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < analytic.size(); ++k) {
    const double scale = std::max({std::fabs(analytic(k)), std::fabs(numeric(k)), kRelativeFloor});
    worst = std::max(worst, std::fabs(analytic(k) - numeric(k)) / scale);
  }
  return worst;
}

inline Vector central_differences(const std::function<double(const Vector&)>& f, const Vector& at) {
  Vector g(at.size());
  Vector p = at;
  for (Eigen::Index k = 0; k < at.size(); ++k) {
    p(k) = at(k) + kFiniteDifferenceStep;
    const double up = f(p);
    p(k) = at(k) - kFiniteDifferenceStep;
    const double down = f(p);
    p(k) = at(k);
    g(k) = (up - down) / (2.0 * kFiniteDifferenceStep);
  }
  return g;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  }
  return m;
}

inline Activation random_activation(Rng& rng) {
  constexpr Activation all[] = {Activation::linear, Activation::relu, Activation::leaky_relu, Activation::tanh,
                                Activation::sigmoid};
  return all[rng.below(5)];
}

inline std::size_t random_width(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

inline DenseNet random_net(std::size_t in, std::size_t out, Rng& rng, Activation output) {
  std::vector<std::size_t> dims = {in};
  const std::size_t hidden = rng.below(3);
  for (std::size_t k = 0; k < hidden; ++k) dims.push_back(random_width(rng, 1, 6));
  dims.push_back(out);
  DenseNet net = DenseNet::create(dims, random_activation(rng), output, rng);
  for (auto& l : net.mutable_layers()) l.alpha = rng.uniform(0.05, 0.5);
  return net;
}

// Smallest |pre-activation| over piecewise-linear layers; finite differences
// are meaningless across a kink, so configurations too close to one are
// redrawn.
inline double kink_margin(const DenseNet& net, const Matrix& x) {
  const auto cache = neural::forward_cached(net, x);
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < net.layers().size(); ++k) {
    const auto a = net.layers()[k].activation;
    if (a == Activation::relu || a == Activation::leaky_relu) {
      margin = std::min(margin, cache.pre_activations[k].cwiseAbs().minCoeff());
    }
  }
  return margin;
}

inline constexpr double kKinkMargin = 1e-3;

// sum(U .* net(x)) with respect to parameters and inputs.
inline double dense_gradient_error(Rng& rng) {
  while (true) {
    const auto in = random_width(rng, 1, 5);
    const auto out = random_width(rng, 1, 4);
    const auto batch = static_cast<Eigen::Index>(random_width(rng, 1, 4));
    DenseNet net = random_net(in, out, rng, random_activation(rng));
    const Matrix x = random_matrix(batch, static_cast<Eigen::Index>(in), rng, -2.0, 2.0);
    const Matrix u = random_matrix(batch, static_cast<Eigen::Index>(out), rng);
    if (kink_margin(net, x) < kKinkMargin) continue;
    const auto g = neural::backward(net, x, u);
    auto loss_of_params = [&](const Vector& p) {
      DenseNet copy = net;
      copy.set_flat_params(p);
      return neural::forward(copy, x).cwiseProduct(u).sum();
    };
    auto loss_of_input = [&](const Vector& flat_x) {
      const Matrix xx = flat_x.reshaped(x.rows(), x.cols());
      return neural::forward(net, xx).cwiseProduct(u).sum();
    };
    const Vector numeric_p = central_differences(loss_of_params, net.flat_params());
    const Vector numeric_x = central_differences(loss_of_input, x.reshaped());
    return std::max(max_relative_error(g.flat(), numeric_p), max_relative_error(g.input.reshaped(), numeric_x));
  }
}

inline double vae_gradient_error(Rng& rng) {
  while (true) {
    neural::VaeModel m;
    m.length = random_width(rng, 1, 4);
    m.dims = random_width(rng, 1, 2);
    m.latent_dim = random_width(rng, 1, 3);
    m.beta = rng.uniform(0.1, 2.0);
    const std::size_t width = m.length * m.dims;
    m.encoder = random_net(width, 2 * m.latent_dim, rng, Activation::linear);
    m.decoder = random_net(m.latent_dim, width, rng, Activation::sigmoid);
    const auto batch = static_cast<Eigen::Index>(random_width(rng, 1, 4));
    const Matrix x = random_matrix(batch, static_cast<Eigen::Index>(width), rng, 0.0, 1.0);
    const Matrix noise = neural::standard_normal_matrix(batch, static_cast<Eigen::Index>(m.latent_dim), rng);
    const auto loss = neural::vae_loss_with_noise(m, x, noise);
    const Matrix enc_out = neural::forward(m.encoder, x);
    const auto l = static_cast<Eigen::Index>(m.latent_dim);
    const Matrix z = enc_out.leftCols(l) + (0.5 * enc_out.rightCols(l).array()).exp().matrix().cwiseProduct(noise);
    if (std::min(kink_margin(m.encoder, x), kink_margin(m.decoder, z)) < kKinkMargin) continue;

    const auto ne = static_cast<Eigen::Index>(m.encoder.param_count());
    Vector params(ne + static_cast<Eigen::Index>(m.decoder.param_count()));
    params << m.encoder.flat_params(), m.decoder.flat_params();
    Vector analytic(params.size());
    analytic << loss.encoder.flat(), loss.decoder.flat();
    auto f = [&](const Vector& p) {
      neural::VaeModel copy = m;
      copy.encoder.set_flat_params(p.head(ne));
      copy.decoder.set_flat_params(p.tail(p.size() - ne));
      return neural::vae_loss_with_noise(copy, x, noise).loss;
    };
    return max_relative_error(analytic, central_differences(f, params));
  }
}

inline neural::GanModel random_gan(Rng& rng) {
  neural::GanModel m;
  m.length = random_width(rng, 1, 4);
  m.dims = random_width(rng, 1, 2);
  m.latent_dim = random_width(rng, 1, 3);
  const auto kind = rng.below(3);
  m.conditioning = kind == 0 ? LabelKind::none : kind == 1 ? LabelKind::static_class : LabelKind::temporal;
  m.num_classes = m.conditioning == LabelKind::static_class ? random_width(rng, 1, 3) : 0;
  const std::size_t width = m.length * m.dims;
  m.generator = random_net(m.latent_dim + m.cond_dim(), width, rng, Activation::sigmoid);
  m.discriminator = random_net(width + m.cond_dim(), 1, rng, Activation::linear);
  m.validate();
  return m;
}

inline Matrix random_conditions(const neural::GanModel& m, Eigen::Index rows, Rng& rng) {
  const auto cd = static_cast<Eigen::Index>(m.cond_dim());
  if (m.conditioning != LabelKind::static_class) return random_matrix(rows, cd, rng, 0.0, 1.0);
  Matrix c = Matrix::Zero(rows, cd);
  for (Eigen::Index i = 0; i < rows; ++i) c(i, static_cast<Eigen::Index>(rng.below(m.num_classes))) = 1.0;
  return c;
}

inline double gan_discriminator_gradient_error(Rng& rng) {
  while (true) {
    const neural::GanModel m = random_gan(rng);
    const auto width = static_cast<Eigen::Index>(m.length * m.dims);
    const auto br = static_cast<Eigen::Index>(random_width(rng, 1, 4));
    const auto bf = static_cast<Eigen::Index>(random_width(rng, 1, 4));
    const Matrix real = random_matrix(br, width, rng, 0.0, 1.0);
    const Matrix fake = random_matrix(bf, width, rng, 0.0, 1.0);
    const Matrix rc = random_conditions(m, br, rng);
    const Matrix fc = random_conditions(m, bf, rng);
    if (std::min(kink_margin(m.discriminator, neural::hconcat(real, rc)),
                 kink_margin(m.discriminator, neural::hconcat(fake, fc))) < kKinkMargin) {
      continue;
    }
    const auto loss = neural::discriminator_loss(m, real, rc, fake, fc);
    auto f = [&](const Vector& p) {
      neural::GanModel copy = m;
      copy.discriminator.set_flat_params(p);
      return neural::discriminator_loss(copy, real, rc, fake, fc).loss;
    };
    return max_relative_error(loss.grads.flat(), central_differences(f, m.discriminator.flat_params()));
  }
}

inline double gan_generator_gradient_error(Rng& rng) {
  while (true) {
    const neural::GanModel m = random_gan(rng);
    const auto b = static_cast<Eigen::Index>(random_width(rng, 1, 4));
    const Matrix z = neural::standard_normal_matrix(b, static_cast<Eigen::Index>(m.latent_dim), rng);
    const Matrix c = random_conditions(m, b, rng);
    const Matrix g_in = neural::hconcat(z, c);
    const Matrix fake = neural::forward(m.generator, g_in);
    if (std::min(kink_margin(m.generator, g_in), kink_margin(m.discriminator, neural::hconcat(fake, c))) <
        kKinkMargin) {
      continue;
    }
    const auto loss = neural::generator_loss(m, z, c);
    auto f = [&](const Vector& p) {
      neural::GanModel copy = m;
      copy.generator.set_flat_params(p);
      return neural::generator_loss(copy, z, c).loss;
    };
    return max_relative_error(loss.grads.flat(), central_differences(f, m.generator.flat_params()));
  }
}

}  // namespace tsforge::testing

#endif  // TSFORGE_TESTS_GRADIENT_CHECK_HPP_
