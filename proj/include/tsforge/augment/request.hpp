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

#ifndef TSFORGE_AUGMENT_REQUEST_HPP_
#define TSFORGE_AUGMENT_REQUEST_HPP_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tsforge/augment/augmentations.hpp"
#include "tsforge/augment/dba.hpp"

namespace tsforge::augment {

enum class Method { gaussian_noise, slice_and_shuffle, flip, magnitude_warp, window_warp, window_slice, dtwba };

inline constexpr std::array<std::pair<Method, std::string_view>, 7> kMethodNames = {{
    {Method::gaussian_noise, "gaussian_noise"},
    {Method::slice_and_shuffle, "slice_and_shuffle"},
    {Method::flip, "flip"},
    {Method::magnitude_warp, "magnitude_warp"},
    {Method::window_warp, "window_warp"},
    {Method::window_slice, "window_slice"},
    {Method::dtwba, "dtwba"},
}};

inline std::string valid_method_list() {
  std::string out;
  for (const auto& [m, name] : kMethodNames) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

inline std::string_view to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "";
}

inline Method parse_method(std::string_view name) {
  for (const auto& [m, n] : kMethodNames) {
    if (n == name) return m;
  }
  throw ParseError("unknown augmentation method '" + std::string(name) + "'; valid methods: " +
                   valid_method_list());
}

inline FlipMode parse_flip_mode(std::string_view name) {
  if (name == "sign") return FlipMode::sign;
  if (name == "time") return FlipMode::time;
  throw ParseError("flip mode must be 'sign' or 'time'");
}

// Union of per-method parameters; each method reads only its own.
struct AugmentParams {
  double sigma = 0.1;                 // gaussian_noise: noise std; magnitude_warp: knot std
  std::size_t n_slices = 4;           // slice_and_shuffle
  FlipMode flip_mode = FlipMode::sign;
  std::size_t n_knots = 4;            // magnitude_warp
  double window_ratio = 0.1;          // window_warp
  std::vector<double> scales = {0.5, 2.0};
  double reduce_ratio = 0.9;          // window_slice
  std::size_t n_iters = 10;           // dtwba
  std::size_t n_neighbors = 5;
};

struct AugmentationRequest {
  Method method = Method::gaussian_noise;
  std::size_t n_new = 1;
  AugmentParams params;
  Seed seed;
};

// The n_new new series only; callers append them to the source if wanted.
inline Dataset run_augmentation(const Dataset& ds, const AugmentationRequest& req) {
  const auto& p = req.params;
  switch (req.method) {
    case Method::gaussian_noise: return gaussian_noise(ds, p.sigma, req.n_new, req.seed);
    case Method::slice_and_shuffle: return slice_and_shuffle(ds, p.n_slices, req.n_new, req.seed);
    case Method::flip: return flip(ds, p.flip_mode, req.n_new, req.seed);
    case Method::magnitude_warp: return magnitude_warp(ds, p.n_knots, p.sigma, req.n_new, req.seed);
    case Method::window_warp: return window_warp(ds, p.window_ratio, p.scales, req.n_new, req.seed);
    case Method::window_slice: return window_slice(ds, p.reduce_ratio, req.n_new, req.seed);
    case Method::dtwba: return dtwba(ds, req.n_new, DtwbaParams{p.n_iters, p.n_neighbors}, req.seed);
  }
  throw PreconditionError("unhandled augmentation method");
}

/*
 * {"method": "window_warp", "n_new": 100, "seed": 7,
 *  "params": {"window_ratio": 0.1, "scales": [0.5, 2.0]}}
 * Parameters not listed keep their defaults.
 */
inline nlohmann::ordered_json to_json(const AugmentationRequest& req) {
  const auto& p = req.params;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  switch (req.method) {
    case Method::gaussian_noise: params["sigma"] = p.sigma; break;
    case Method::slice_and_shuffle: params["n_slices"] = p.n_slices; break;
    case Method::flip: params["mode"] = p.flip_mode == FlipMode::sign ? "sign" : "time"; break;
    case Method::magnitude_warp:
      params["n_knots"] = p.n_knots;
      params["sigma"] = p.sigma;
      break;
    case Method::window_warp:
      params["window_ratio"] = p.window_ratio;
      params["scales"] = p.scales;
      break;
    case Method::window_slice: params["reduce_ratio"] = p.reduce_ratio; break;
    case Method::dtwba:
      params["n_iters"] = p.n_iters;
      params["n_neighbors"] = p.n_neighbors;
      break;
  }
  return {{"method", std::string(to_string(req.method))},
          {"n_new", req.n_new},
          {"seed", req.seed.value},
          {"params", params}};
}

inline AugmentationRequest augmentation_request_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("method")) throw ParseError("augmentation request needs a 'method'");
  AugmentationRequest req;
  try {
    req.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("n_new")) req.n_new = j.at("n_new").get<std::size_t>();
    if (j.contains("seed")) req.seed = Seed{j.at("seed").get<std::uint64_t>()};
    if (j.contains("params")) {
      auto& p = req.params;
      for (const auto& [key, value] : j.at("params").items()) {
        if (key == "sigma") p.sigma = value.get<double>();
        else if (key == "n_slices") p.n_slices = value.get<std::size_t>();
        else if (key == "mode") p.flip_mode = parse_flip_mode(value.get<std::string>());
        else if (key == "n_knots") p.n_knots = value.get<std::size_t>();
        else if (key == "window_ratio") p.window_ratio = value.get<double>();
        else if (key == "scales") p.scales = value.get<std::vector<double>>();
        else if (key == "reduce_ratio") p.reduce_ratio = value.get<double>();
        else if (key == "n_iters") p.n_iters = value.get<std::size_t>();
        else if (key == "n_neighbors") p.n_neighbors = value.get<std::size_t>();
        else throw ParseError("unknown augmentation parameter '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("augmentation request: ") + e.what());
  }
  if (req.n_new < 1) throw ParseError("n_new must be at least 1");
  return req;
}

}  // namespace tsforge::augment

#endif  // TSFORGE_AUGMENT_REQUEST_HPP_
