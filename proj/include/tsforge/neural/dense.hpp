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

#ifndef TSFORGE_NEURAL_DENSE_HPP_
#define TSFORGE_NEURAL_DENSE_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"

namespace tsforge::neural {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;

enum class Activation { linear, relu, leaky_relu, tanh, sigmoid };

inline std::string to_string(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "linear";
}

inline Activation parse_activation(const std::string& name) {
  for (Activation a : {Activation::linear, Activation::relu, Activation::leaky_relu, Activation::tanh,
                       Activation::sigmoid}) {
    if (to_string(a) == name) return a;
  }
  throw ParseError("unknown activation '" + name + "'");
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// An affine map followed by an elementwise activation. weights is [in, out].
struct Layer {
  Matrix weights;
  RowVector biases;
  Activation activation = Activation::linear;
  double alpha = 0.2;  // leaky_relu slope

  std::size_t input_dim() const { return static_cast<std::size_t>(weights.rows()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(weights.cols()); }

  bool operator==(const Layer& o) const {
    return weights == o.weights && biases == o.biases && activation == o.activation && alpha == o.alpha;
  }
};

class DenseNet {
 public:
  DenseNet() = default;
  explicit DenseNet(std::vector<Layer> layers) : layers_(std::move(layers)) { validate(); }

  // Layer widths `dims` (input first); hidden layers share one activation.
  // Weights and biases are U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static DenseNet create(const std::vector<std::size_t>& dims, Activation hidden, Activation output,
                         Rng& rng) {
    if (dims.size() < 2) throw PreconditionError("a network needs at least input and output widths");
    std::vector<Layer> layers;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
      if (dims[k] == 0 || dims[k + 1] == 0) throw PreconditionError("layer widths must be positive");
      const double bound = 1.0 / std::sqrt(static_cast<double>(dims[k]));
      Layer layer;
      layer.weights.resize(static_cast<Eigen::Index>(dims[k]), static_cast<Eigen::Index>(dims[k + 1]));
      layer.biases.resize(static_cast<Eigen::Index>(dims[k + 1]));
      for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) layer.weights(i, j) = rng.uniform(-bound, bound);
      }
      for (Eigen::Index j = 0; j < layer.biases.size(); ++j) layer.biases(j) = rng.uniform(-bound, bound);
      layer.activation = k + 2 == dims.size() ? output : hidden;
      layers.push_back(std::move(layer));
    }
    return DenseNet(std::move(layers));
  }

  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<Layer>& mutable_layers() { return layers_; }
  std::size_t input_dim() const { return layers_.empty() ? 0 : layers_.front().input_dim(); }
  std::size_t output_dim() const { return layers_.empty() ? 0 : layers_.back().output_dim(); }

  std::size_t param_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += static_cast<std::size_t>(l.weights.size() + l.biases.size());
    return n;
  }

  // Parameters flattened layer by layer: weights column-major, then biases.
  Vector flat_params() const {
    Vector out(static_cast<Eigen::Index>(param_count()));
    Eigen::Index at = 0;
    for (const auto& l : layers_) {
      out.segment(at, l.weights.size()) = l.weights.reshaped();
      at += l.weights.size();
      out.segment(at, l.biases.size()) = l.biases.transpose();
      at += l.biases.size();
    }
    return out;
  }

  void set_flat_params(const Vector& p) {
    if (static_cast<std::size_t>(p.size()) != param_count()) throw DimensionError("parameter vector has wrong size");
    Eigen::Index at = 0;
    for (auto& l : layers_) {
      l.weights.reshaped() = p.segment(at, l.weights.size());
      at += l.weights.size();
      l.biases = p.segment(at, l.biases.size()).transpose();
      at += l.biases.size();
    }
  }

  bool operator==(const DenseNet&) const = default;

 private:
  void validate() const {
    if (layers_.empty()) throw PreconditionError("a network needs at least one layer");
    for (std::size_t k = 0; k < layers_.size(); ++k) {
      const auto& l = layers_[k];
      if (l.biases.size() != l.weights.cols()) throw DimensionError("bias width does not match layer output");
      if (k > 0 && layers_[k - 1].output_dim() != l.input_dim()) {
        throw DimensionError("layer " + std::to_string(k) + " input does not chain with previous output");
      }
      if (!l.weights.allFinite() || !l.biases.allFinite()) throw NumericError("network parameters are not finite");
    }
  }

  std::vector<Layer> layers_;
};

// Gradients in the same layout as the network parameters.
struct NetGradients {
  std::vector<Matrix> weights;
  std::vector<RowVector> biases;
  Matrix input;  // d objective / d x, [B, in]

  Vector flat() const {
    Eigen::Index n = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) n += weights[k].size() + biases[k].size();
    Vector out(n);
    Eigen::Index at = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      out.segment(at, weights[k].size()) = weights[k].reshaped();
      at += weights[k].size();
      out.segment(at, biases[k].size()) = biases[k].transpose();
      at += biases[k].size();
    }
    return out;
  }
};

// Per-layer values retained for backpropagation.
struct ForwardCache {
  std::vector<Matrix> inputs;           // input to each layer
  std::vector<Matrix> pre_activations;  // affine output of each layer
  Matrix output;
};

namespace detail {

inline void activate(Matrix& z, Activation a, double alpha) {
  switch (a) {
    case Activation::linear: break;
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::leaky_relu: z = z.unaryExpr([alpha](double v) { return v > 0.0 ? v : alpha * v; }); break;
    case Activation::tanh: z = z.array().tanh().matrix(); break;
    case Activation::sigmoid: z = z.unaryExpr([](double v) { return sigmoid(v); }); break;
  }
}

// Elementwise derivative of the activation, given pre-activation z and
// output y.
inline Matrix activation_derivative(const Matrix& z, const Matrix& y, Activation a, double alpha) {
  switch (a) {
    case Activation::linear: return Matrix::Ones(z.rows(), z.cols());
    case Activation::relu: return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
    case Activation::leaky_relu: return z.unaryExpr([alpha](double v) { return v > 0.0 ? 1.0 : alpha; });
    case Activation::tanh: return (1.0 - y.array().square()).matrix();
    case Activation::sigmoid: return (y.array() * (1.0 - y.array())).matrix();
  }
  return Matrix::Ones(z.rows(), z.cols());
}

}  // namespace detail

inline ForwardCache forward_cached(const DenseNet& net, const Matrix& x) {
  if (static_cast<std::size_t>(x.cols()) != net.input_dim()) {
    throw DimensionError("input has " + std::to_string(x.cols()) + " columns, network expects " +
                         std::to_string(net.input_dim()));
  }
  ForwardCache cache;
  Matrix a = x;
  for (const auto& l : net.layers()) {
    cache.inputs.push_back(a);
    Matrix z = a * l.weights;
    z.rowwise() += l.biases;
    cache.pre_activations.push_back(z);
    detail::activate(z, l.activation, l.alpha);
    a = std::move(z);
  }
  cache.output = std::move(a);
  return cache;
}

inline Matrix forward(const DenseNet& net, const Matrix& x) { return forward_cached(net, x).output; }

// Gradients of sum(upstream .* forward(x)) with respect to parameters and x.
inline NetGradients backward(const DenseNet& net, const ForwardCache& cache, const Matrix& upstream) {
  if (upstream.rows() != cache.output.rows() || upstream.cols() != cache.output.cols()) {
    throw DimensionError("upstream gradient shape does not match network output");
  }
  const auto& layers = net.layers();
  NetGradients g;
  g.weights.resize(layers.size());
  g.biases.resize(layers.size());
  Matrix grad = upstream;
  for (std::size_t k = layers.size(); k-- > 0;) {
    const auto& l = layers[k];
    const Matrix& y = k + 1 < layers.size() ? cache.inputs[k + 1] : cache.output;
    const Matrix dz = grad.cwiseProduct(detail::activation_derivative(cache.pre_activations[k], y, l.activation, l.alpha));
    g.weights[k] = cache.inputs[k].transpose() * dz;
    g.biases[k] = dz.colwise().sum();
    grad = dz * l.weights.transpose();
  }
  g.input = std::move(grad);
  return g;
}

inline NetGradients backward(const DenseNet& net, const Matrix& x, const Matrix& upstream) {
  return backward(net, forward_cached(net, x), upstream);
}

}  // namespace tsforge::neural

#endif  // TSFORGE_NEURAL_DENSE_HPP_
