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

#ifndef TSFORGE_CLI_COMMANDS_HPP_
#define TSFORGE_CLI_COMMANDS_HPP_

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tsforge/abc/fit.hpp"
#include "tsforge/augment/request.hpp"
#include "tsforge/core/csv.hpp"
#include "tsforge/core/dataset.hpp"
#include "tsforge/core/error.hpp"
#include "tsforge/core/json_io.hpp"
#include "tsforge/core/rng.hpp"
#include "tsforge/core/transforms.hpp"
#include "tsforge/embed/embedding.hpp"
#include "tsforge/embed/pca.hpp"
#include "tsforge/embed/periodogram.hpp"
#include "tsforge/embed/tsne.hpp"
#include "tsforge/generators/simulator.hpp"
#include "tsforge/metrics/metrics.hpp"
#include "tsforge/neural/checkpoint.hpp"
#include "tsforge/neural/gan.hpp"
#include "tsforge/neural/vae.hpp"
#include "tsforge/stats/summary.hpp"

namespace tsforge::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct GenOptions {
  std::string architecture = "vae";
  std::size_t n_epochs = 100;
  std::size_t latent_dim = 8;
  std::size_t batch_size = 64;
  std::vector<std::size_t> hidden = {64};
  double learning_rate = 1e-4;
  double beta = 1.0;
  std::string source_data;
  std::string source_labels;
  std::string dest_data;
  std::string loss_history;  // empty: <dest-data>.loss_history.csv
  std::string checkpoint;
  std::size_t n_samples = 0;  // 0: as many as the source has
  std::size_t abc_budget = 200;
  std::size_t abc_sim_batch = 10;
  std::string stat_config;
};

struct EvalOptions {
  std::string source_data;
  std::string synthetic_data;
  std::string test_data;
  std::string holdout;
  std::string report;
  std::string summary_csv;
  std::string stat_config;
  std::string norm = "l2";
  std::string diversity_mode = "pooled";
  bool no_scale = false;
  std::vector<std::size_t> consistency_windows = {2, 4, 8};
  double ridge_lambda = 1e-3;
  double synth_test_fraction = 0.3;
  std::size_t dg_window = 8;
  std::size_t dg_splits = 10;
  std::size_t dg_augment = 100;
  std::size_t occ_k = 1;
  double occ_alpha = 0.95;
};

struct AugmentOptions {
  std::string source_data;
  std::string source_labels;
  std::string dest_data;
  std::string request;
  std::string method = "gaussian_noise";
  std::size_t n_new = 1;
  augment::AugmentParams params;
  std::string flip_mode = "sign";
};

struct EmbedOptions {
  std::string source_data;
  std::string synthetic_data;
  std::string dest_data;
  std::string method = "pca";
  double perplexity = 30.0;
  int n_iter = 1000;
  std::string diagnostics;
  std::string spectrum;
};

namespace detail {

inline std::uint64_t default_seed() {
  const char* env = std::getenv("TSFORGE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("TSFORGE_SEED must be an unsigned integer");
  return value;
}

inline Dataset load(const std::string& path, const std::string& labels_path = "") {
  Dataset ds = csv::read_dataset_file(path);
  if (labels_path.empty()) return ds;
  std::ifstream in(labels_path);
  if (!in) throw ParseError("cannot open '" + labels_path + "'");
  return csv::attach_labels(ds, in);
}

inline nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

inline Dataset renamed_like(const Dataset& ds, const Dataset& like) {
  return Dataset(ds.n(), ds.length(), ds.dims(), std::vector<double>(ds.values().begin(), ds.values().end()),
                 ds.labels(), like.feature_names());
}

inline std::size_t class_count(const Dataset& ds) {
  int top = -1;
  for (int y : ds.static_labels()) {
    if (y < 0) throw PreconditionError("class labels must be non-negative for cgan");
    top = std::max(top, y);
  }
  return static_cast<std::size_t>(top) + 1;
}

}  // namespace detail

inline int cmd_gen(const GenOptions& o, Seed seed, std::ostream& out) {
  const Dataset source = detail::load(o.source_data, o.source_labels);
  const std::size_t n = o.n_samples > 0 ? o.n_samples : source.n();
  const std::string history_path = o.loss_history.empty() ? o.dest_data + ".loss_history.csv" : o.loss_history;
  Dataset synth = source;
  std::ostringstream history;

  if (o.architecture.starts_with("simulator:")) {
    const std::string name = o.architecture.substr(10);
    generators::SimulatorSpec spec;
    if (name == "sine_const") {
      spec = generators::sine_const_simulator(source.length(), source.dims());
    } else if (name == "gp") {
      spec = generators::gp_simulator(source.length(), source.dims());
    } else {
      throw ParseError("unknown simulator '" + name + "' (valid: sine_const, gp)");
    }
    abc::FitConfig fit_cfg;
    fit_cfg.sim_batch = o.abc_sim_batch;
    if (!o.stat_config.empty()) fit_cfg.stat_cfg = stats::stat_config_from_json(detail::load_json(o.stat_config));
    const auto fit = abc::fit_simulator(spec, without_labels(source), o.abc_budget, fit_cfg, derive_seed(seed, 0));
    synth = generators::simulate(spec, fit.best_params, n, derive_seed(seed, 1));
    history << "candidate,discrepancy\n";
    for (std::size_t k = 0; k < fit.discrepancies.size(); ++k) {
      history << k << ',' << csv::format_real(fit.discrepancies[k]) << '\n';
    }
    out << "fitted " << name << ":";
    for (std::size_t k = 0; k < spec.param_names.size(); ++k) {
      out << ' ' << spec.param_names[k] << '=' << csv::format_real(fit.best_params[k]);
    }
    out << '\n';
  } else {
    neural::TrainConfig train;
    train.epochs = o.n_epochs;
    train.batch_size = o.batch_size;
    train.adam.lr = o.learning_rate;
    auto [scaled, scaler] = minmax_scale(source);
    if (o.architecture == "vae") {
      neural::VaeArchitecture arch{o.latent_dim, o.hidden, o.beta};
      auto model = neural::make_vae(source.length(), source.dims(), arch, derive_seed(seed, 0));
      auto result = neural::vae_train(std::move(model), without_labels(scaled), train, derive_seed(seed, 1));
      synth = neural::vae_generate(result.model, n, derive_seed(seed, 2));
      history << "epoch,loss\n";
      for (std::size_t e = 0; e < result.loss_history.size(); ++e) {
        history << e << ',' << csv::format_real(result.loss_history[e]) << '\n';
      }
      if (!o.checkpoint.empty()) neural::save_checkpoint(o.checkpoint, result.model);
    } else if (o.architecture == "gan" || o.architecture == "cgan") {
      const bool conditional = o.architecture == "cgan";
      if (conditional && source.label_kind() == LabelKind::none) {
        throw PreconditionError("cgan needs labelled source data (label column or --source-data-labels)");
      }
      const Dataset data = conditional ? scaled : without_labels(scaled);
      const LabelKind kind = data.label_kind();
      const std::size_t classes = kind == LabelKind::static_class ? detail::class_count(data) : 0;
      neural::GanArchitecture arch{o.latent_dim, o.hidden};
      auto model = neural::make_gan(source.length(), source.dims(), arch, kind, classes, derive_seed(seed, 0));
      auto result = neural::gan_train(std::move(model), data, train, derive_seed(seed, 1));
      synth = neural::gan_generate(result.model, n, std::nullopt, derive_seed(seed, 2));
      history << "epoch,d_loss,g_loss\n";
      for (std::size_t e = 0; e < result.d_loss_history.size(); ++e) {
        history << e << ',' << csv::format_real(result.d_loss_history[e]) << ','
                << csv::format_real(result.g_loss_history[e]) << '\n';
      }
      if (!o.checkpoint.empty()) neural::save_checkpoint(o.checkpoint, result.model);
    } else {
      throw ParseError("unknown architecture '" + o.architecture +
                       "' (valid: vae, gan, cgan, simulator:sine_const, simulator:gp)");
    }
    synth = minmax_unscale(synth, scaler);
  }
  synth = detail::renamed_like(synth, source);
  csv::write_dataset_file(o.dest_data, synth);
  auto hist = detail::open_out(history_path);
  hist << history.str();
  out << "wrote " << synth.n() << " series to " << o.dest_data << '\n';
  return kExitOk;
}

inline int cmd_eval(const EvalOptions& o, Seed seed, std::ostream& out, std::ostream& err) {
  const Dataset real = without_labels(detail::load(o.source_data));
  const Dataset synth = without_labels(detail::load(o.synthetic_data));
  Dataset test = real;
  if (o.test_data.empty()) {
    err << "note: no --test-data given; real data doubles as the test set\n";
  } else {
    test = without_labels(detail::load(o.test_data));
  }
  std::optional<Dataset> holdout;
  if (!o.holdout.empty()) holdout = without_labels(detail::load(o.holdout));

  metrics::EvalConfig cfg;
  if (!o.stat_config.empty()) cfg.stat_cfg = stats::stat_config_from_json(detail::load_json(o.stat_config));
  cfg.stat_cfg.validate(real.length());
  cfg.norm = stats::parse_norm(o.norm);
  cfg.diversity_mode = metrics::parse_diversity_mode(o.diversity_mode);
  cfg.scale = !o.no_scale;
  cfg.consistency_models.clear();
  for (std::size_t w : o.consistency_windows) cfg.consistency_models.push_back({w, o.ridge_lambda});
  cfg.synth_test_fraction = o.synth_test_fraction;
  cfg.dg_model = {o.dg_window, o.ridge_lambda};
  cfg.dg_splits = o.dg_splits;
  cfg.dg_augment = o.dg_augment;
  cfg.occ = {o.occ_k, o.occ_alpha};
  cfg.seed = seed;

  const auto report = metrics::evaluate_all(real, test, synth, cfg, holdout);
  {
    auto file = detail::open_out(o.report);
    file << metrics::report_to_json_string(report);
  }
  if (!o.summary_csv.empty()) {
    auto file = detail::open_out(o.summary_csv);
    metrics::write_report_csv(file, report);
  }
  for (const auto& [name, e] : report.entries()) {
    out << name << ": ";
    if (e.score) {
      out << csv::format_real(*e.score) << " (" << metrics::to_string(e.direction) << ")\n";
    } else {
      out << "skipped (" << *e.skipped << ")\n";
    }
  }
  return kExitOk;
}

inline int cmd_augment(const AugmentOptions& o, Seed seed, std::ostream& out) {
  const Dataset source = detail::load(o.source_data, o.source_labels);
  augment::AugmentationRequest req;
  if (!o.request.empty()) {
    req = augment::augmentation_request_from_json(detail::load_json(o.request));
  } else {
    req.method = augment::parse_method(o.method);
    req.n_new = o.n_new;
    req.params = o.params;
    req.params.flip_mode = augment::parse_flip_mode(o.flip_mode);
    req.seed = seed;
  }
  const Dataset fresh = augment::run_augmentation(source, req);
  const Dataset enlarged = concat(source, detail::renamed_like(fresh, source));
  csv::write_dataset_file(o.dest_data, enlarged);
  out << "appended " << fresh.n() << " series (" << augment::to_string(req.method) << "); wrote " << enlarged.n()
      << " series to " << o.dest_data << '\n';
  return kExitOk;
}

inline int cmd_embed(const EmbedOptions& o, Seed seed, std::ostream& out) {
  const Dataset real = detail::load(o.source_data);
  std::optional<Dataset> synth;
  if (!o.synthetic_data.empty()) synth = detail::load(o.synthetic_data);
  Eigen::MatrixXd points;
  std::vector<embed::SourceTag> tags;
  if (synth) {
    std::tie(points, tags) = embed::stack_points(real, *synth);
  } else {
    points = embed::feature_average(real);
    tags.assign(real.n(), embed::SourceTag::real);
  }
  embed::EmbeddingResult result;
  if (embed::parse_embed_method(o.method) == embed::EmbedMethod::pca) {
    result = embed::pca_embed(points, tags);
  } else {
    embed::TsneConfig cfg;
    cfg.perplexity = o.perplexity;
    cfg.n_iter = o.n_iter;
    result = embed::tsne_embed(points, cfg, seed, tags);
  }
  {
    auto file = detail::open_out(o.dest_data);
    embed::write_embedding_csv(file, result);
  }
  if (!o.diagnostics.empty()) {
    nlohmann::ordered_json j;
    j["method"] = std::string(embed::to_string(result.method));
    j["points"] = result.coords.rows();
    for (const auto& [k, v] : result.diagnostics) j["diagnostics"][k] = v;
    auto file = detail::open_out(o.diagnostics);
    file << dump_json(j) << '\n';
  }
  if (!o.spectrum.empty()) {
    auto file = detail::open_out(o.spectrum);
    embed::write_spectrum_csv(file, real, synth ? *synth : real);
  }
  out << "wrote " << result.coords.rows() << " points to " << o.dest_data << '\n';
  return kExitOk;
}

/*
 * Entry point shared by the binary and the tests. Exit codes: 0 success,
 * 2 usage or input error, 3 numeric failure.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::uint64_t seed_value = 0;
  try {
    seed_value = detail::default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"tsforge: synthetic time series generation, evaluation, augmentation and embedding", "tsforge"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.add_option("--seed", seed_value, "Random seed (default taken from TSFORGE_SEED, else 0)");

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "Train a generator on real data and write synthetic series");
  g->add_option("--architecture-type", gen.architecture, "vae | gan | cgan | simulator:sine_const | simulator:gp");
  g->add_option("--n-epochs", gen.n_epochs, "Training epochs (0 writes samples from the untrained model)");
  g->add_option("--latent-dim", gen.latent_dim, "Latent dimension");
  g->add_option("--batch-size", gen.batch_size, "Minibatch size");
  g->add_option("--hidden", gen.hidden, "Hidden layer widths")->delimiter(',');
  g->add_option("--learning-rate", gen.learning_rate, "Adam learning rate");
  g->add_option("--beta", gen.beta, "VAE KL weight");
  g->add_option("--source-data", gen.source_data, "Real data CSV")->required();
  g->add_option("--source-data-labels", gen.source_labels, "Optional label CSV for the source data");
  g->add_option("--dest-data", gen.dest_data, "Output CSV for synthetic series")->required();
  g->add_option("--loss-history", gen.loss_history, "Loss history CSV (empty: <dest-data>.loss_history.csv)");
  g->add_option("--checkpoint", gen.checkpoint, "Write the trained model as JSON");
  g->add_option("--n-samples", gen.n_samples, "Number of series to generate (0: same as source)");
  g->add_option("--abc-budget", gen.abc_budget, "Simulator fit: candidate parameter draws");
  g->add_option("--abc-sim-batch", gen.abc_sim_batch, "Simulator fit: series simulated per candidate");
  g->add_option("--stat-config", gen.stat_config, "Simulator fit: statistic configuration JSON");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "Compare synthetic series with real data and write a metric report");
  e->add_option("--source-data", ev.source_data, "Real (training) data CSV")->required();
  e->add_option("--synthetic-data", ev.synthetic_data, "Synthetic data CSV")->required();
  e->add_option("--test-data", ev.test_data, "Real test CSV (empty: reuse --source-data)");
  e->add_option("--holdout", ev.holdout, "Real series not used for training; enables the privacy metric");
  e->add_option("--report", ev.report, "Output report JSON")->required();
  e->add_option("--summary-csv", ev.summary_csv, "Optional one-row CSV of scores");
  e->add_option("--stat-config", ev.stat_config, "Statistic configuration JSON (empty: defaults)");
  e->add_option("--norm", ev.norm, "Distance norm: l1 | l2 | linf");
  e->add_option("--diversity-mode", ev.diversity_mode, "pooled | per_timestep");
  e->add_flag("--no-scale", ev.no_scale, "Skip min-max scaling with the real-data fit");
  e->add_option("--consistency-windows", ev.consistency_windows, "Ridge autoregressor windows")->delimiter(',');
  e->add_option("--ridge-lambda", ev.ridge_lambda, "Ridge penalty for all task models");
  e->add_option("--synth-test-fraction", ev.synth_test_fraction, "Synthetic share held out for consistency");
  e->add_option("--dg-window", ev.dg_window, "Downstream-gain autoregressor window");
  e->add_option("--dg-splits", ev.dg_splits, "Downstream-gain repetitions");
  e->add_option("--dg-augment", ev.dg_augment, "Synthetic series added per repetition");
  e->add_option("--occ-k", ev.occ_k, "Privacy attack: neighbour rank k");
  e->add_option("--occ-alpha", ev.occ_alpha, "Privacy attack: threshold quantile");

  AugmentOptions au;
  auto* a = app.add_subcommand("augment", "Append augmented series to a dataset");
  a->add_option("--source-data", au.source_data, "Input CSV")->required();
  a->add_option("--source-data-labels", au.source_labels, "Optional label CSV for the input");
  a->add_option("--dest-data", au.dest_data, "Output CSV (input plus new series)")->required();
  a->add_option("--request", au.request, "Augmentation request JSON (overrides the flags below)");
  a->add_option("--method", au.method, "Method: " + augment::valid_method_list());
  a->add_option("--n-new", au.n_new, "Number of new series");
  a->add_option("--sigma", au.params.sigma, "gaussian_noise std / magnitude_warp knot std");
  a->add_option("--n-slices", au.params.n_slices, "slice_and_shuffle: slices per series");
  a->add_option("--flip-mode", au.flip_mode, "flip: sign | time");
  a->add_option("--n-knots", au.params.n_knots, "magnitude_warp: spline knots");
  a->add_option("--window-ratio", au.params.window_ratio, "window_warp: window length / T");
  a->add_option("--scales", au.params.scales, "window_warp: speed factors")->delimiter(',');
  a->add_option("--reduce-ratio", au.params.reduce_ratio, "window_slice: kept share of T");
  a->add_option("--n-iters", au.params.n_iters, "dtwba: barycenter iterations");
  a->add_option("--n-neighbors", au.params.n_neighbors, "dtwba: set size per barycenter");

  EmbedOptions em;
  auto* m = app.add_subcommand("embed", "Write a 2-D embedding (x,y,tag CSV) of real and synthetic series");
  m->add_option("--source-data", em.source_data, "Real data CSV")->required();
  m->add_option("--synthetic-data", em.synthetic_data, "Synthetic data CSV (optional)");
  m->add_option("--dest-data", em.dest_data, "Output CSV")->required();
  m->add_option("--method", em.method, "pca | tsne");
  m->add_option("--perplexity", em.perplexity, "t-SNE perplexity");
  m->add_option("--n-iter", em.n_iter, "t-SNE iterations");
  m->add_option("--diagnostics", em.diagnostics, "Optional diagnostics JSON");
  m->add_option("--spectrum", em.spectrum, "Optional mean periodogram CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Seed seed{seed_value};
  try {
    if (*g) return cmd_gen(gen, seed, out);
    if (*e) return cmd_eval(ev, seed, out, err);
    if (*a) return cmd_augment(au, seed, out);
    return cmd_embed(em, seed, out);
  } catch (const NumericError& ex) {
    err << "numeric error: " << ex.what() << '\n';
    return kExitNumeric;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& ex) {
    err << "error: malformed JSON: " << ex.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace tsforge::cli

#endif  // TSFORGE_CLI_COMMANDS_HPP_
