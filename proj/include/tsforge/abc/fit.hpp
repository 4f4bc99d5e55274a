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

#ifndef TSFORGE_ABC_FIT_HPP_
#define TSFORGE_ABC_FIT_HPP_

#include <limits>
#include <vector>

#include "tsforge/abc/rejection.hpp"

namespace tsforge::abc {

struct FitConfig {
  std::size_t sim_batch = 10;
  stats::StatConfig stat_cfg = stats::StatConfig::defaults();
  stats::Norm norm = stats::Norm::l2;
  bool raw_discrepancy = false;
};

struct FitResult {
  std::vector<double> best_params;
  double best_discrepancy = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  std::vector<double> discrepancies;  // one per candidate, in draw order
};

/*
 * Random-search minimisation of the simulator discrepancy over the prior.
 * Candidate k is the same draw rejection_sample would make at attempt k for
 * the same seed, so a larger budget only ever adds candidates and the best
 * discrepancy cannot get worse. Ties keep the earliest candidate.
 */
inline FitResult fit_simulator(const SimulatorSpec& spec, const Dataset& observed, std::size_t budget,
                               const FitConfig& cfg, Seed seed) {
  if (budget < 1) throw PreconditionError("fit budget must be at least 1");
  if (cfg.sim_batch < 1) throw PreconditionError("sim_batch must be at least 1");
  const Discrepancy discrepancy(observed, cfg.stat_cfg, cfg.norm, cfg.raw_discrepancy);
  FitResult result;
  result.discrepancies.reserve(budget);
  for (std::size_t k = 0; k < budget; ++k) {
    Candidate c = evaluate_candidate(spec, discrepancy, cfg.sim_batch, seed, k);
    result.discrepancies.push_back(c.discrepancy);
    if (k == 0 || c.discrepancy < result.best_discrepancy) {
      result.best_discrepancy = c.discrepancy;
      result.best_params = std::move(c.params);
      result.best_index = k;
    }
  }
  return result;
}

}  // namespace tsforge::abc

#endif  // TSFORGE_ABC_FIT_HPP_
