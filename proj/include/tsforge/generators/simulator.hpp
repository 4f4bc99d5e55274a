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

#ifndef TSFORGE_GENERATORS_SIMULATOR_HPP_
#define TSFORGE_GENERATORS_SIMULATOR_HPP_

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/generators/gp.hpp"
#include "tsforge/generators/sine_const.hpp"

namespace tsforge::generators {

struct UniformPrior {
  double lo = 0.0;
  double hi = 1.0;
};

struct NormalPrior {
  double mean = 0.0;
  double stddev = 1.0;
};

using Prior = std::variant<UniformPrior, NormalPrior>;

inline double sample_prior(const Prior& prior, Rng& rng) {
  if (const auto* u = std::get_if<UniformPrior>(&prior)) return rng.uniform(u->lo, u->hi);
  const auto& g = std::get<NormalPrior>(prior);
  return rng.normal(g.mean, g.stddev);
}

inline bool in_support(const Prior& prior, double value) {
  if (!std::isfinite(value)) return false;
  if (const auto* u = std::get_if<UniformPrior>(&prior)) return value >= u->lo && value <= u->hi;
  return true;
}

inline double prior_cdf(const Prior& prior, double value) {
  if (const auto* u = std::get_if<UniformPrior>(&prior)) {
    if (value <= u->lo) return 0.0;
    if (value >= u->hi) return 1.0;
    return (value - u->lo) / (u->hi - u->lo);
  }
  const auto& g = std::get<NormalPrior>(prior);
  return 0.5 * std::erfc(-(value - g.mean) / (g.stddev * std::sqrt(2.0)));
}

using SampleFn = std::function<Dataset(std::span<const double> params, std::size_t n, Seed seed)>;

// A parametric generator G(params): named parameters, one prior each, and a
// sampling procedure emitting n series of shape (T, D).
struct SimulatorSpec {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<Prior> priors;
  std::size_t length = 1;
  std::size_t dims = 1;
  SampleFn sample;

  std::vector<double> draw_parameters(Rng& rng) const {
    std::vector<double> params(priors.size());
    for (std::size_t k = 0; k < priors.size(); ++k) params[k] = sample_prior(priors[k], rng);
    return params;
  }

  bool in_support(std::span<const double> params) const {
    if (params.size() != priors.size()) return false;
    for (std::size_t k = 0; k < params.size(); ++k) {
      if (!generators::in_support(priors[k], params[k])) return false;
    }
    return true;
  }
};

inline Dataset simulate(const SimulatorSpec& spec, std::span<const double> params, std::size_t n,
                        Seed seed) {
  if (spec.priors.size() != spec.param_names.size()) {
    throw PreconditionError("simulator '" + spec.name + "' has priors not matching its parameters");
  }
  if (params.size() != spec.param_names.size()) {
    throw DimensionError("simulator '" + spec.name + "' expects " +
                         std::to_string(spec.param_names.size()) + " parameters");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!in_support(spec.priors[k], params[k])) {
      throw DomainError("parameter '" + spec.param_names[k] + "' lies outside its prior support");
    }
  }
  if (n == 0) throw PreconditionError("cannot simulate an empty dataset (n = 0)");
  Dataset out = spec.sample(params, n, seed);
  if (out.n() != n || out.length() != spec.length || out.dims() != spec.dims) {
    throw DimensionError("simulator '" + spec.name + "' produced a dataset of the wrong shape");
  }
  return out;
}

// Parameters (max_scale, max_const); other fields of `base` stay fixed.
inline SimulatorSpec sine_const_simulator(std::size_t length, std::size_t dims,
                                          SineConstParams base = {},
                                          std::vector<Prior> priors = {UniformPrior{9.0, 11.0},
                                                                       UniformPrior{19.0, 21.0}}) {
  SimulatorSpec spec;
  spec.name = "sine_const";
  spec.param_names = {"max_scale", "max_const"};
  spec.priors = std::move(priors);
  spec.length = length;
  spec.dims = dims;
  spec.sample = [base, length, dims](std::span<const double> params, std::size_t n, Seed seed) {
    SineConstParams p = base;
    p.max_scale = params[0];
    p.max_const = params[1];
    return sine_const_generate(p, n, length, dims, seed);
  };
  return spec;
}

// Parameters (lengthscale, variance).
inline SimulatorSpec gp_simulator(std::size_t length, std::size_t dims,
                                  std::vector<Prior> priors = {UniformPrior{1.0, 10.0},
                                                               UniformPrior{0.5, 2.0}}) {
  SimulatorSpec spec;
  spec.name = "gp";
  spec.param_names = {"lengthscale", "variance"};
  spec.priors = std::move(priors);
  spec.length = length;
  spec.dims = dims;
  spec.sample = [length, dims](std::span<const double> params, std::size_t n, Seed seed) {
    return gp_sample(n, length, dims, params[0], params[1], seed).data;
  };
  return spec;
}

// {"max_scale": {"uniform": [9, 11]}, "max_const": {"normal": [20, 0.5]}}
inline nlohmann::ordered_json priors_to_json(const SimulatorSpec& spec) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < spec.param_names.size(); ++k) {
    if (const auto* u = std::get_if<UniformPrior>(&spec.priors[k])) {
      j[spec.param_names[k]] = {{"uniform", {u->lo, u->hi}}};
    } else {
      const auto& g = std::get<NormalPrior>(spec.priors[k]);
      j[spec.param_names[k]] = {{"normal", {g.mean, g.stddev}}};
    }
  }
  return j;
}

inline Prior prior_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_object() || j.size() != 1) {
    throw ParseError("prior for '" + name + "' must be {\"uniform\": [lo, hi]} or {\"normal\": [mu, sigma]}");
  }
  const auto it = j.begin();
  const std::string kind = it.key();
  const nlohmann::json& args = it.value();
  if (!args.is_array() || args.size() != 2 || !args[0].is_number() || !args[1].is_number()) {
    throw ParseError("prior for '" + name + "' needs two numbers");
  }
  const double a = args[0].get<double>();
  const double b = args[1].get<double>();
  if (kind == "uniform") {
    if (!(a < b)) throw ParseError("uniform prior for '" + name + "' needs lo < hi");
    return UniformPrior{a, b};
  }
  if (kind == "normal") {
    if (!(b > 0.0)) throw ParseError("normal prior for '" + name + "' needs sigma > 0");
    return NormalPrior{a, b};
  }
  throw ParseError("unknown prior family '" + kind + "' for '" + name + "'");
}

// Replaces the priors of `spec` with those in `j`; every parameter must be
// covered and no unknown names may appear.
inline void apply_priors(SimulatorSpec& spec, const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("priors must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const auto& name : spec.param_names) found = found || name == key;
    if (!found) throw ParseError("unknown parameter '" + key + "' for simulator '" + spec.name + "'");
  }
  std::vector<Prior> priors;
  for (const auto& name : spec.param_names) {
    if (!j.contains(name)) throw ParseError("no prior given for parameter '" + name + "'");
    priors.push_back(prior_from_json(j.at(name), name));
  }
  spec.priors = std::move(priors);
}

}  // namespace tsforge::generators

#endif  // TSFORGE_GENERATORS_SIMULATOR_HPP_
