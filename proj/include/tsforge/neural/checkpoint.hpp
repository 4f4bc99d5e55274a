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

#ifndef TSFORGE_NEURAL_CHECKPOINT_HPP_
#define TSFORGE_NEURAL_CHECKPOINT_HPP_

#include <fstream>
#include <string>

#include "json.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/json_io.hpp"
#include "tsforge/neural/gan.hpp"
#include "tsforge/neural/vae.hpp"

/*
 * JSON checkpoints. A network is
 *   {"layers": [{"in": I, "out": O, "activation": "...", "alpha": a,
 *                "weights": [I*O values, row-major], "biases": [O values]}]}
 * and a model file wraps its networks with the shape metadata:
 *   {"kind": "vae"|"gan", "length": T, "dims": D, "latent_dim": L, ...,
 *    "networks": {...}}
 * Reals are written with 17 significant digits.
 */
namespace tsforge::neural {

using Json = nlohmann::ordered_json;

inline Json net_to_json(const DenseNet& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers()) {
    Json weights = Json::array();
    for (Eigen::Index i = 0; i < l.weights.rows(); ++i) {
      for (Eigen::Index j = 0; j < l.weights.cols(); ++j) weights.push_back(l.weights(i, j));
    }
    Json biases = Json::array();
    for (Eigen::Index j = 0; j < l.biases.size(); ++j) biases.push_back(l.biases(j));
    layers.push_back(Json{{"in", l.input_dim()},
                          {"out", l.output_dim()},
                          {"activation", to_string(l.activation)},
                          {"alpha", l.alpha},
                          {"weights", std::move(weights)},
                          {"biases", std::move(biases)}});
  }
  return Json{{"layers", std::move(layers)}};
}

namespace detail {

template <class J>
const J& field(const J& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("checkpoint is missing '") + key + "'");
  return j.at(key);
}

template <class J>
std::size_t size_field(const J& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_unsigned()) throw ParseError(std::string("checkpoint field '") + key + "' must be a count");
  return v.template get<std::size_t>();
}

template <class J>
double real_field(const J& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw ParseError(std::string("checkpoint field '") + key + "' must be a number");
  return v.template get<double>();
}

template <class J>
Matrix matrix_from_json(const J& values, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (!values.is_array() || static_cast<Eigen::Index>(values.size()) != rows * cols) {
    throw ParseError(std::string("checkpoint '") + what + "' has the wrong number of values");
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const auto& v = values[static_cast<std::size_t>(i * cols + j)];
      if (!v.is_number()) throw ParseError(std::string("checkpoint '") + what + "' contains a non-number");
      m(i, j) = v.template get<double>();
    }
  }
  return m;
}

}  // namespace detail

template <class J>
DenseNet net_from_json(const J& j) {
  const auto& layers = detail::field(j, "layers");
  if (!layers.is_array() || layers.empty()) throw ParseError("checkpoint network has no layers");
  std::vector<Layer> out;
  for (const auto& lj : layers) {
    const auto in = static_cast<Eigen::Index>(detail::size_field(lj, "in"));
    const auto o = static_cast<Eigen::Index>(detail::size_field(lj, "out"));
    Layer l;
    const auto& act = detail::field(lj, "activation");
    if (!act.is_string()) throw ParseError("checkpoint activation must be a string");
    l.activation = parse_activation(act.template get<std::string>());
    l.alpha = detail::real_field(lj, "alpha");
    l.weights = detail::matrix_from_json(detail::field(lj, "weights"), in, o, "weights");
    l.biases = detail::matrix_from_json(detail::field(lj, "biases"), 1, o, "biases");
    out.push_back(std::move(l));
  }
  return DenseNet(std::move(out));
}

inline Json to_json(const VaeModel& m) {
  return Json{{"kind", "vae"},
              {"length", m.length},
              {"dims", m.dims},
              {"latent_dim", m.latent_dim},
              {"beta", m.beta},
              {"networks", Json{{"encoder", net_to_json(m.encoder)}, {"decoder", net_to_json(m.decoder)}}}};
}

inline std::string conditioning_name(LabelKind k) {
  switch (k) {
    case LabelKind::none: return "none";
    case LabelKind::static_class: return "static";
    case LabelKind::temporal: return "temporal";
  }
  return "none";
}

inline Json to_json(const GanModel& m) {
  Json pool = Json::array();
  for (Eigen::Index i = 0; i < m.condition_pool.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.condition_pool.cols(); ++j) pool.push_back(m.condition_pool(i, j));
  }
  return Json{{"kind", "gan"},
              {"length", m.length},
              {"dims", m.dims},
              {"latent_dim", m.latent_dim},
              {"conditioning", conditioning_name(m.conditioning)},
              {"num_classes", m.num_classes},
              {"condition_pool_rows", static_cast<std::size_t>(m.condition_pool.rows())},
              {"condition_pool", std::move(pool)},
              {"networks",
               Json{{"generator", net_to_json(m.generator)}, {"discriminator", net_to_json(m.discriminator)}}}};
}

template <class J>
std::string kind_of(const J& j) {
  const auto& k = detail::field(j, "kind");
  if (!k.is_string()) throw ParseError("checkpoint 'kind' must be a string");
  return k.template get<std::string>();
}

template <class J>
VaeModel vae_from_json(const J& j) {
  if (kind_of(j) != "vae") throw ParseError("checkpoint is not a VAE");
  VaeModel m;
  m.length = detail::size_field(j, "length");
  m.dims = detail::size_field(j, "dims");
  m.latent_dim = detail::size_field(j, "latent_dim");
  m.beta = detail::real_field(j, "beta");
  const auto& nets = detail::field(j, "networks");
  m.encoder = net_from_json(detail::field(nets, "encoder"));
  m.decoder = net_from_json(detail::field(nets, "decoder"));
  m.validate();
  return m;
}

template <class J>
GanModel gan_from_json(const J& j) {
  if (kind_of(j) != "gan") throw ParseError("checkpoint is not a GAN");
  GanModel m;
  m.length = detail::size_field(j, "length");
  m.dims = detail::size_field(j, "dims");
  m.latent_dim = detail::size_field(j, "latent_dim");
  const auto& c = detail::field(j, "conditioning");
  const std::string cname = c.is_string() ? c.template get<std::string>() : "";
  if (cname == "none") {
    m.conditioning = LabelKind::none;
  } else if (cname == "static") {
    m.conditioning = LabelKind::static_class;
  } else if (cname == "temporal") {
    m.conditioning = LabelKind::temporal;
  } else {
    throw ParseError("checkpoint conditioning must be none, static or temporal");
  }
  m.num_classes = detail::size_field(j, "num_classes");
  const auto rows = static_cast<Eigen::Index>(detail::size_field(j, "condition_pool_rows"));
  m.condition_pool = detail::matrix_from_json(detail::field(j, "condition_pool"), rows,
                                              static_cast<Eigen::Index>(m.cond_dim()), "condition_pool");
  const auto& nets = detail::field(j, "networks");
  m.generator = net_from_json(detail::field(nets, "generator"));
  m.discriminator = net_from_json(detail::field(nets, "discriminator"));
  m.validate();
  return m;
}

template <class Model>
void save_checkpoint(const std::string& path, const Model& model) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot open '" + path + "' for writing");
  out << dump_json(to_json(model)) << '\n';
}

inline Json load_checkpoint_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace tsforge::neural

#endif  // TSFORGE_NEURAL_CHECKPOINT_HPP_
