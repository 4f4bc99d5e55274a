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

#ifndef TSFORGE_ABC_REJECTION_HPP_
#define TSFORGE_ABC_REJECTION_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsforge/core/csv.hpp"
#include "tsforge/core/dataset.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/generators/simulator.hpp"
#include "tsforge/stats/summary.hpp"

namespace tsforge::abc {

using generators::SimulatorSpec;

// Distance between simulated data and a fixed observed dataset, on summary
// statistics by default or on the raw tensors (equal shapes only).
class Discrepancy {
 public:
  Discrepancy(const Dataset& observed, stats::StatConfig cfg, stats::Norm norm, bool raw = false)
      : observed_(observed), cfg_(std::move(cfg)), norm_(norm), raw_(raw) {
    if (!raw_) observed_stats_ = stats::summarize(observed_, cfg_);
  }

  double operator()(const Dataset& simulated) const {
    if (raw_) {
      if (simulated.n() != observed_.n() || simulated.length() != observed_.length() ||
          simulated.dims() != observed_.dims()) {
        throw DimensionError("raw discrepancy needs simulated and observed data of equal shape");
      }
      return stats::norm_of_difference(simulated.values(), observed_.values(), norm_);
    }
    return stats::stat_distance(stats::summarize(simulated, cfg_), observed_stats_, norm_);
  }

 private:
  Dataset observed_;
  stats::StatConfig cfg_;
  stats::Norm norm_;
  bool raw_;
  stats::StatVector observed_stats_;
};

struct RejectionConfig {
  double epsilon = 0.5;
  std::size_t n_particles = 10;
  std::size_t max_attempts = 10000;
  std::size_t sim_batch = 10;
  stats::StatConfig stat_cfg = stats::StatConfig::defaults();
  stats::Norm norm = stats::Norm::l2;
  bool raw_discrepancy = false;

  void validate() const {
    if (!(epsilon >= 0.0) || std::isnan(epsilon)) throw PreconditionError("epsilon must be >= 0");
    if (n_particles < 1) throw PreconditionError("n_particles must be at least 1");
    if (max_attempts < n_particles) throw PreconditionError("max_attempts must be >= n_particles");
    if (sim_batch < 1) throw PreconditionError("sim_batch must be at least 1");
  }
};

struct PosteriorSample {
  std::vector<std::string> param_names;
  std::vector<std::vector<double>> particles;  // [n_accepted][n_params]
  std::vector<double> discrepancies;
  std::vector<std::size_t> candidate_indices;  // attempt index of each particle
  std::size_t attempts = 0;
  double acceptance_rate = 0.0;

  std::vector<double> column(std::size_t param) const {
    std::vector<double> out;
    out.reserve(particles.size());
    for (const auto& p : particles) out.push_back(p[param]);
    return out;
  }
};

// Raised when max_attempts candidates were tried without reaching
// n_particles acceptances; carries whatever was accepted.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, PosteriorSample partial)
      : Error(what), partial_(std::move(partial)) {}
  const PosteriorSample& partial() const { return partial_; }

 private:
  PosteriorSample partial_;
};

struct Candidate {
  std::vector<double> params;
  double discrepancy = 0.0;
};

// Candidate `index` of the stream rooted at `seed`: parameters from the
// priors and one simulated batch, both from derive_seed(seed, index).
inline Candidate evaluate_candidate(const SimulatorSpec& spec, const Discrepancy& discrepancy,
                                    std::size_t sim_batch, Seed seed, std::size_t index) {
  Rng rng(derive_seed(seed, index));
  Candidate c;
  c.params = spec.draw_parameters(rng);
  const Seed sim_seed{rng.next()};
  c.discrepancy = discrepancy(generators::simulate(spec, c.params, sim_batch, sim_seed));
  return c;
}

inline PosteriorSample rejection_sample(const SimulatorSpec& spec, const Dataset& observed,
                                        const RejectionConfig& cfg, Seed seed) {
  cfg.validate();
  const Discrepancy discrepancy(observed, cfg.stat_cfg, cfg.norm, cfg.raw_discrepancy);
  PosteriorSample out;
  out.param_names = spec.param_names;
  while (out.particles.size() < cfg.n_particles) {
    if (out.attempts == cfg.max_attempts) {
      out.acceptance_rate =
          static_cast<double>(out.particles.size()) / static_cast<double>(out.attempts);
      throw BudgetExhausted("rejection sampling exhausted " + std::to_string(cfg.max_attempts) +
                                " attempts with " + std::to_string(out.particles.size()) +
                                " particles accepted",
                            std::move(out));
    }
    Candidate c = evaluate_candidate(spec, discrepancy, cfg.sim_batch, seed, out.attempts);
    if (c.discrepancy < cfg.epsilon) {
      out.particles.push_back(std::move(c.params));
      out.discrepancies.push_back(c.discrepancy);
      out.candidate_indices.push_back(out.attempts);
    }
    ++out.attempts;
  }
  out.acceptance_rate = static_cast<double>(out.particles.size()) / static_cast<double>(out.attempts);
  return out;
}

// Epsilon giving roughly `target_rate` acceptance: the target_rate quantile
// of the discrepancies of `n_pilot` prior candidates drawn from `seed`.
inline double calibrate_epsilon(const SimulatorSpec& spec, const Dataset& observed,
                                const RejectionConfig& cfg, double target_rate,
                                std::size_t n_pilot, Seed seed) {
  if (!(target_rate > 0.0 && target_rate <= 1.0)) throw PreconditionError("target rate must lie in (0, 1]");
  if (n_pilot < 1) throw PreconditionError("n_pilot must be at least 1");
  const Discrepancy discrepancy(observed, cfg.stat_cfg, cfg.norm, cfg.raw_discrepancy);
  std::vector<double> values;
  values.reserve(n_pilot);
  for (std::size_t a = 0; a < n_pilot; ++a) {
    values.push_back(evaluate_candidate(spec, discrepancy, cfg.sim_batch, seed, a).discrepancy);
  }
  std::sort(values.begin(), values.end());
  const auto k = static_cast<std::size_t>(std::ceil(target_rate * static_cast<double>(n_pilot)));
  const std::size_t idx = std::min(k, n_pilot) - (k > 0 ? 1 : 0);
  // Strictly above the k-th smallest so that candidate is accepted.
  return std::nextafter(values[idx], std::numeric_limits<double>::infinity());
}

// CSV with one column per parameter plus "discrepancy".
inline void write_posterior_csv(std::ostream& out, const PosteriorSample& sample) {
  for (const auto& name : sample.param_names) out << name << ',';
  out << "discrepancy\n";
  for (std::size_t i = 0; i < sample.particles.size(); ++i) {
    for (double v : sample.particles[i]) out << csv::format_real(v) << ',';
    out << csv::format_real(sample.discrepancies[i]) << '\n';
  }
}

// {"epsilon": 0.5, "n_particles": 10, "max_attempts": 10000, "sim_batch": 10,
//  "norm": "L2", "stats": {...}, "raw_discrepancy": false}
// epsilon may be the string "inf".
inline RejectionConfig rejection_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("rejection config must be a JSON object");
  RejectionConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "epsilon") {
      if (value.is_string() && value.get<std::string>() == "inf") {
        cfg.epsilon = std::numeric_limits<double>::infinity();
      } else if (value.is_number()) {
        cfg.epsilon = value.get<double>();
      } else {
        throw ParseError("epsilon must be a number or \"inf\"");
      }
    } else if (key == "n_particles") {
      cfg.n_particles = value.get<std::size_t>();
    } else if (key == "max_attempts") {
      cfg.max_attempts = value.get<std::size_t>();
    } else if (key == "sim_batch") {
      cfg.sim_batch = value.get<std::size_t>();
    } else if (key == "norm") {
      cfg.norm = stats::parse_norm(value.get<std::string>());
    } else if (key == "stats") {
      cfg.stat_cfg = stats::stat_config_from_json(value);
    } else if (key == "raw_discrepancy") {
      cfg.raw_discrepancy = value.get<bool>();
    } else {
      throw ParseError("unknown rejection config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace tsforge::abc

#endif  // TSFORGE_ABC_REJECTION_HPP_
