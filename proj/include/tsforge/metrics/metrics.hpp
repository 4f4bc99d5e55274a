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

#ifndef TSFORGE_METRICS_METRICS_HPP_
#define TSFORGE_METRICS_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/core/transforms.hpp"
#include "tsforge/metrics/ks.hpp"
#include "tsforge/metrics/models.hpp"
#include "tsforge/metrics/report.hpp"
#include "tsforge/stats/summary.hpp"

namespace tsforge::metrics {

// --- similarity -------------------------------------------------------------

inline double similarity_metric(const Dataset& real, const Dataset& synth, const stats::StatConfig& cfg,
                                stats::Norm norm = stats::Norm::l2) {
  if (real.dims() != synth.dims()) throw DimensionError("real and synthetic feature counts differ");
  return stats::stat_distance(stats::summarize(real, cfg), stats::summarize(synth, cfg), norm);
}

// --- diversity --------------------------------------------------------------

enum class DiversityMode { pooled, per_timestep };

inline std::string_view to_string(DiversityMode m) { return m == DiversityMode::pooled ? "pooled" : "per_timestep"; }

inline DiversityMode parse_diversity_mode(std::string_view s) {
  if (s == "pooled") return DiversityMode::pooled;
  if (s == "per_timestep") return DiversityMode::per_timestep;
  throw ParseError("diversity mode must be pooled or per_timestep");
}

namespace detail {

inline std::vector<double> feature_values(const Dataset& ds, std::size_t d, std::optional<std::size_t> t) {
  std::vector<double> out;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    if (t) {
      out.push_back(ds(i, *t, d));
    } else {
      for (std::size_t s = 0; s < ds.length(); ++s) out.push_back(ds(i, s, d));
    }
  }
  return out;
}

}  // namespace detail

// KS statistics between real and synthetic marginals, per feature (pooled
// over series and time) or per (timestep, feature). Score is their mean.
inline MetricEntry diversity_metric(const Dataset& real, const Dataset& synth, DiversityMode mode) {
  if (real.dims() != synth.dims()) throw DimensionError("real and synthetic feature counts differ");
  if (mode == DiversityMode::per_timestep && real.length() != synth.length()) {
    throw DimensionError("per-timestep diversity needs equal series lengths");
  }
  MetricEntry e;
  e.direction = Direction::lower_better;
  double sum = 0.0, worst = 0.0;
  std::size_t count = 0;
  for (std::size_t d = 0; d < real.dims(); ++d) {
    if (mode == DiversityMode::pooled) {
      const double ks = ks_statistic(detail::feature_values(real, d, std::nullopt),
                                     detail::feature_values(synth, d, std::nullopt));
      e.components["ks_" + real.feature_names()[d]] = ks;
      sum += ks;
      worst = std::max(worst, ks);
      ++count;
    } else {
      double feature_sum = 0.0;
      for (std::size_t t = 0; t < real.length(); ++t) {
        const double ks = ks_statistic(detail::feature_values(real, d, t), detail::feature_values(synth, d, t));
        feature_sum += ks;
        sum += ks;
        worst = std::max(worst, ks);
        ++count;
      }
      e.components["ks_" + real.feature_names()[d]] = feature_sum / static_cast<double>(real.length());
    }
  }
  e.components["mean"] = sum / static_cast<double>(count);
  e.components["max"] = worst;
  e.score = e.components["mean"];
  return e;
}

// --- predictive consistency -------------------------------------------------

struct ModelSpec {
  std::size_t window = 8;
  double lambda = 1e-3;

  bool operator==(const ModelSpec&) const = default;
};

struct ConsistencyResult {
  double score = 0.0;
  std::size_t consistent_pairs = 0;
  std::size_t ordered_pairs = 0;
  std::vector<double> real_mse;
  std::vector<double> synth_mse;
};

inline int sign_with_tolerance(double diff, double tol) {
  if (std::fabs(diff) <= tol) return 0;
  return diff > 0.0 ? 1 : -1;
}

// Fraction of ordered model pairs ranked the same way by both score lists.
inline ConsistencyResult consistency_from_scores(const std::vector<double>& real, const std::vector<double>& synth,
                                                 double tie_tol) {
  if (real.size() != synth.size()) throw DimensionError("score lists differ in length");
  if (real.size() < 2) throw PreconditionError("consistency needs at least two models");
  if (!(tie_tol >= 0.0)) throw DomainError("tie tolerance must be >= 0");
  ConsistencyResult r;
  r.real_mse = real;
  r.synth_mse = synth;
  for (std::size_t a = 0; a < real.size(); ++a) {
    for (std::size_t b = 0; b < real.size(); ++b) {
      if (a == b) continue;
      ++r.ordered_pairs;
      r.consistent_pairs += sign_with_tolerance(real[a] - real[b], tie_tol) ==
                            sign_with_tolerance(synth[a] - synth[b], tie_tol);
    }
  }
  r.score = static_cast<double>(r.consistent_pairs) / static_cast<double>(r.ordered_pairs);
  return r;
}

inline ConsistencyResult predictive_consistency(const std::vector<ModelSpec>& models, const Dataset& real_train,
                                                const Dataset& real_test, const Dataset& synth_train,
                                                const Dataset& synth_test, double tie_tol) {
  if (models.size() < 2) throw PreconditionError("consistency needs at least two models");
  std::vector<double> real, synth;
  for (const auto& m : models) {
    RidgeAutoregressor on_real(m.window, m.lambda);
    on_real.fit(real_train);
    real.push_back(on_real.mse(real_test));
    RidgeAutoregressor on_synth(m.window, m.lambda);
    on_synth.fit(synth_train);
    synth.push_back(on_synth.mse(synth_test));
  }
  return consistency_from_scores(real, synth, tie_tol);
}

// --- downstream gain --------------------------------------------------------

struct GainResult {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation over splits
  double mse_real_only = 0.0;
  std::vector<double> gains;
};

/*
 * Gain in one-step autoregression MSE on real_test from adding synthetic
 * series to real_train. Each split draws min(n_augment, N_synth) synthetic
 * series without replacement; the real-only baseline is shared.
 */
inline GainResult downstream_gain(const Dataset& real_train, const Dataset& real_test, const Dataset& synth,
                                  const ModelSpec& model, std::size_t n_splits, Seed seed,
                                  std::size_t n_augment = 100) {
  if (n_splits < 1) throw PreconditionError("n_splits must be at least 1");
  if (n_augment < 1) throw PreconditionError("n_augment must be at least 1");
  if (real_train.length() != synth.length() || real_train.dims() != synth.dims() ||
      real_train.dims() != real_test.dims()) {
    throw DimensionError("real and synthetic datasets have incompatible shapes");
  }
  const Dataset real_only = without_labels(real_train);
  const Dataset synth_plain = without_labels(synth);
  RidgeAutoregressor base(model.window, model.lambda);
  base.fit(real_only);
  GainResult r;
  r.mse_real_only = base.mse(real_test);
  const std::size_t take = std::min(n_augment, synth.n());
  for (std::size_t s = 0; s < n_splits; ++s) {
    Rng rng(derive_seed(seed, s));
    auto order = rng.permutation(synth.n());
    order.resize(take);
    const Dataset augmented = concat(real_only, select(synth_plain, order));
    RidgeAutoregressor aug(model.window, model.lambda);
    aug.fit(augmented);
    r.gains.push_back(r.mse_real_only - aug.mse(real_test));
  }
  for (double g : r.gains) r.mean += g / static_cast<double>(n_splits);
  if (n_splits > 1) {
    double sq = 0.0;
    for (double g : r.gains) sq += (g - r.mean) * (g - r.mean);
    r.std = std::sqrt(sq / static_cast<double>(n_splits - 1));
  }
  return r;
}

// --- membership inference ---------------------------------------------------

struct PrivacyResult {
  double score = 0.0;  // 1 - precision
  double precision = 0.0;
  std::size_t declared = 0;
  std::size_t declared_train = 0;
  bool chance_fallback = false;
  double threshold = 0.0;
};

/*
 * A k-NN one-class model fitted on the synthetic series declares real
 * series "members"; precision is the share of declared series that really
 * were training members. With nothing declared, precision falls back to
 * the chance level |train| / (|train| + |holdout|). The attack itself is
 * deterministic; `seed` is accepted for interface symmetry.
 */
inline PrivacyResult privacy_mia(const Dataset& real_train, const Dataset& real_holdout, const Dataset& synth,
                                 const KnnOccParams& occ, [[maybe_unused]] Seed seed = Seed{0}) {
  if (real_train.series_size() != synth.series_size() || real_holdout.series_size() != synth.series_size()) {
    throw DimensionError("real and synthetic series shapes differ");
  }
  const KnnOcc model(series_matrix(synth), occ);
  PrivacyResult r;
  r.threshold = model.threshold();
  const Matrix train = series_matrix(real_train);
  const Matrix hold = series_matrix(real_holdout);
  for (Eigen::Index i = 0; i < train.rows(); ++i) {
    if (model.is_member(train.row(i))) {
      ++r.declared;
      ++r.declared_train;
    }
  }
  for (Eigen::Index i = 0; i < hold.rows(); ++i) r.declared += model.is_member(hold.row(i));
  if (r.declared == 0) {
    r.chance_fallback = true;
    r.precision = static_cast<double>(real_train.n()) / static_cast<double>(real_train.n() + real_holdout.n());
  } else {
    r.precision = static_cast<double>(r.declared_train) / static_cast<double>(r.declared);
  }
  r.score = 1.0 - r.precision;
  return r;
}

// --- battery ----------------------------------------------------------------

struct EvalConfig {
  stats::StatConfig stat_cfg = stats::StatConfig::defaults();
  stats::Norm norm = stats::Norm::l2;
  bool scale = true;  // min-max scale everything with the real_train fit
  DiversityMode diversity_mode = DiversityMode::pooled;
  std::vector<ModelSpec> consistency_models = {{2, 1e-3}, {4, 1e-3}, {8, 1e-3}};
  double tie_tol = 1e-9;
  double synth_test_fraction = 0.3;
  ModelSpec dg_model = {8, 1e-3};
  std::size_t dg_splits = 10;
  std::size_t dg_augment = 100;
  KnnOccParams occ;
  Seed seed{0};
};

inline nlohmann::ordered_json to_json(const EvalConfig& c) {
  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (const auto& m : c.consistency_models) models.push_back({{"window", m.window}, {"lambda", m.lambda}});
  return {{"stats", stats::to_json(c.stat_cfg)},
          {"norm", std::string(stats::to_string(c.norm))},
          {"scale", c.scale},
          {"diversity_mode", std::string(to_string(c.diversity_mode))},
          {"consistency_models", models},
          {"tie_tol", c.tie_tol},
          {"synth_test_fraction", c.synth_test_fraction},
          {"dg_model", {{"window", c.dg_model.window}, {"lambda", c.dg_model.lambda}}},
          {"dg_splits", c.dg_splits},
          {"dg_augment", c.dg_augment},
          {"occ", {{"k", c.occ.k}, {"alpha", c.occ.alpha}}},
          {"seed", c.seed.value}};
}

inline std::string config_digest(const EvalConfig& c) { return fnv1a_hex(dump_json(to_json(c), -1)); }

/*
 * Runs distance, diversity, consistency, downstream gain and privacy with a
 * shared configuration. Synthetic data is split into train/test parts for
 * consistency. Privacy needs a real holdout set disjoint from real_train and
 * is reported as skipped without one.
 */
inline MetricReport evaluate_all(const Dataset& real_train, const Dataset& real_test, const Dataset& synth,
                                 const EvalConfig& cfg, const std::optional<Dataset>& holdout = std::nullopt) {
  for (const Dataset* ds : {&real_test, &synth}) {
    if (ds->length() != real_train.length() || ds->dims() != real_train.dims()) {
      throw DimensionError("real and synthetic datasets must share T and D");
    }
  }
  if (holdout && (holdout->length() != real_train.length() || holdout->dims() != real_train.dims())) {
    throw DimensionError("holdout must share T and D with real_train");
  }
  const std::string digest = config_digest(cfg);
  const double scaled_flag = cfg.scale ? 1.0 : 0.0;
  std::optional<ScalerState> scaler;
  if (cfg.scale) scaler = fit_minmax(real_train);
  auto prep = [&](const Dataset& ds) { return scaler ? minmax_apply(ds, *scaler) : ds; };
  const Dataset train = prep(real_train);
  const Dataset test = prep(real_test);
  const Dataset syn = prep(synth);

  MetricReport report;

  MetricEntry distance;
  distance.direction = Direction::lower_better;
  distance.score = similarity_metric(train, syn, cfg.stat_cfg, cfg.norm);
  distance.components["n_stats"] = static_cast<double>(cfg.stat_cfg.stats_per_feature() * train.dims());
  distance.components["scaled"] = scaled_flag;
  distance.config_digest = digest;
  report.set("distance", std::move(distance));

  MetricEntry diversity = diversity_metric(train, syn, cfg.diversity_mode);
  diversity.components["scaled"] = scaled_flag;
  diversity.config_digest = digest;
  report.set("diversity", std::move(diversity));

  const auto [synth_train, synth_test] = train_holdout_split(syn, cfg.synth_test_fraction, derive_seed(cfg.seed, 1));
  const auto pc = predictive_consistency(cfg.consistency_models, train, test, synth_train, synth_test, cfg.tie_tol);
  MetricEntry consistency;
  consistency.direction = Direction::higher_better;
  consistency.score = pc.score;
  consistency.components["consistent_pairs"] = static_cast<double>(pc.consistent_pairs);
  consistency.components["ordered_pairs"] = static_cast<double>(pc.ordered_pairs);
  for (std::size_t k = 0; k < cfg.consistency_models.size(); ++k) {
    const std::string tag = "w" + std::to_string(cfg.consistency_models[k].window) + "_" + std::to_string(k);
    consistency.components["mse_real_" + tag] = pc.real_mse[k];
    consistency.components["mse_synth_" + tag] = pc.synth_mse[k];
  }
  consistency.components["scaled"] = scaled_flag;
  consistency.config_digest = digest;
  report.set("consistency", std::move(consistency));

  const auto dg = downstream_gain(train, test, syn, cfg.dg_model, cfg.dg_splits, derive_seed(cfg.seed, 2),
                                  cfg.dg_augment);
  MetricEntry gain;
  gain.direction = Direction::higher_better;
  gain.score = dg.mean;
  gain.components["std"] = dg.std;
  const double half = 1.96 * dg.std / std::sqrt(static_cast<double>(cfg.dg_splits));
  gain.components["ci95_low"] = dg.mean - half;
  gain.components["ci95_high"] = dg.mean + half;
  gain.components["mse_real_only"] = dg.mse_real_only;
  gain.components["n_splits"] = static_cast<double>(cfg.dg_splits);
  gain.components["scaled"] = scaled_flag;
  gain.config_digest = digest;
  report.set("downstream_gain", std::move(gain));

  MetricEntry privacy;
  privacy.direction = Direction::higher_better;
  privacy.config_digest = digest;
  if (holdout) {
    const auto p = privacy_mia(train, prep(*holdout), syn, cfg.occ, derive_seed(cfg.seed, 3));
    privacy.score = p.score;
    privacy.components["precision"] = p.precision;
    privacy.components["declared"] = static_cast<double>(p.declared);
    privacy.components["declared_train"] = static_cast<double>(p.declared_train);
    privacy.components["chance_fallback"] = p.chance_fallback ? 1.0 : 0.0;
    privacy.components["threshold"] = p.threshold;
    privacy.components["scaled"] = scaled_flag;
  } else {
    privacy.skipped = "no real holdout dataset was given";
  }
  report.set("privacy", std::move(privacy));
  return report;
}

}  // namespace tsforge::metrics

#endif  // TSFORGE_METRICS_METRICS_HPP_
