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

#include <cmath>
#include <numbers>

#include "gradient_check.hpp"
#include "gtest/gtest.h"
#include "tsforge/core/transforms.hpp"
#include "tsforge/generators/sine_const.hpp"
#include "tsforge/neural/adam.hpp"
#include "tsforge/neural/checkpoint.hpp"
#include "tsforge/neural/dense.hpp"
#include "tsforge/neural/gan.hpp"
#include "tsforge/neural/vae.hpp"

namespace tsforge::neural {
namespace {

Dataset UnitSines(std::size_t n, std::size_t length, std::uint64_t seed) {
  Rng rng(Seed{seed});
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (std::size_t t = 0; t < length; ++t) v.push_back(0.5 + 0.5 * std::sin(0.5 * t + phase));
  }
  return Dataset(n, length, 1, std::move(v));
}

// Zeroes the last layer so the network outputs its activation at 0 plus
// `bias`.
void PinLastLayer(DenseNet& net, const RowVector& bias) {
  auto& last = net.mutable_layers().back();
  last.weights.setZero();
  last.biases = bias;
}

TEST(DenseTest, IdentityLayer) {
  Layer l;
  l.weights = Matrix::Identity(3, 3);
  l.biases = RowVector::Zero(3);
  const DenseNet net({l});
  Rng rng(Seed{1});
  const Matrix x = testing::random_matrix(4, 3, rng);
  EXPECT_EQ(forward(net, x), x);
}

TEST(DenseTest, ReluOnNegativeInputs) {
  Layer l;
  l.weights = Matrix::Identity(2, 2);
  l.biases = RowVector::Zero(2);
  l.activation = Activation::relu;
  const DenseNet net({l});
  Matrix x(1, 2);
  x << -1.0, -3.0;
  EXPECT_EQ(forward(net, x), Matrix::Zero(1, 2));
  const auto g = backward(net, x, Matrix::Ones(1, 2));
  EXPECT_EQ(g.input, Matrix::Zero(1, 2));
  EXPECT_EQ(g.weights[0], Matrix::Zero(2, 2));
}

TEST(DenseTest, RejectsShapeMismatch) {
  Rng rng(Seed{2});
  const DenseNet net = DenseNet::create({3, 4, 2}, Activation::tanh, Activation::linear, rng);
  EXPECT_THROW(forward(net, Matrix::Zero(1, 2)), DimensionError);
  EXPECT_THROW(backward(net, Matrix::Zero(1, 3), Matrix::Zero(1, 3)), DimensionError);
  Layer a;
  a.weights = Matrix::Zero(2, 3);
  a.biases = RowVector::Zero(3);
  Layer b;
  b.weights = Matrix::Zero(4, 1);
  b.biases = RowVector::Zero(1);
  EXPECT_THROW(DenseNet({a, b}), DimensionError);
}

TEST(GradientCheckTest, DenseNetworks) {
  Rng rng(Seed{10});
  for (int k = 0; k < 25; ++k) EXPECT_LT(testing::dense_gradient_error(rng), 1e-4);
}

TEST(GradientCheckTest, VaeLoss) {
  Rng rng(Seed{11});
  for (int k = 0; k < 25; ++k) EXPECT_LT(testing::vae_gradient_error(rng), 1e-4);
}

TEST(GradientCheckTest, GanDiscriminatorLoss) {
  Rng rng(Seed{12});
  for (int k = 0; k < 25; ++k) EXPECT_LT(testing::gan_discriminator_gradient_error(rng), 1e-4);
}

TEST(GradientCheckTest, GanGeneratorLoss) {
  Rng rng(Seed{13});
  for (int k = 0; k < 25; ++k) EXPECT_LT(testing::gan_generator_gradient_error(rng), 1e-4);
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  Vector p(3);
  p << 1.0, -2.0, 0.5;
  const Vector before = p;
  AdamState state(3, AdamConfig{});
  adam_step(p, Vector::Zero(3), state);
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.step, 1u);
}

TEST(AdamTest, FirstStepMovesByLearningRateAgainstGradientSign) {
  Vector p = Vector::Zero(4);
  Vector g(4);
  g << 0.3, -2.0, 1e-3, -50.0;
  AdamState state(4, AdamConfig{});
  adam_step(p, g, state);
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(p(k), -1e-4 * (g(k) > 0 ? 1.0 : -1.0), 1e-4 * 1e-4);
  }
}

TEST(AdamTest, DeterministicAndRejectsNonFinite) {
  auto run = [] {
    Vector p = Vector::Ones(2);
    AdamState state(2, AdamConfig{});
    for (int k = 0; k < 10; ++k) adam_step(p, p * 2.0, state);
    return p;
  };
  EXPECT_EQ(run(), run());
  Vector p = Vector::Ones(2);
  AdamState state(2, AdamConfig{});
  Vector bad(2);
  bad << 1.0, std::nan("");
  EXPECT_THROW(adam_step(p, bad, state), NumericError);
}

TEST(VaeTest, KlVanishesWhenPosteriorIsPrior) {
  VaeModel m = make_vae(5, 2, VaeArchitecture{3, {8}, 1.0}, Seed{1});
  PinLastLayer(m.encoder, RowVector::Zero(6));
  Rng rng(Seed{2});
  const auto loss = vae_loss(m, testing::random_matrix(4, 10, rng, 0.0, 1.0), Seed{3});
  EXPECT_EQ(loss.kl, 0.0);
}

TEST(VaeTest, KlOfShiftedMean) {
  VaeModel m = make_vae(4, 1, VaeArchitecture{3, {8}, 1.0}, Seed{1});
  RowVector bias = RowVector::Zero(6);
  bias.head(3).setConstant(1.5);
  PinLastLayer(m.encoder, bias);
  Rng rng(Seed{4});
  const auto loss = vae_loss(m, testing::random_matrix(2, 4, rng, 0.0, 1.0), Seed{5});
  EXPECT_NEAR(loss.kl, 3 * 1.5 * 1.5 / 2.0, 1e-12);
}

TEST(VaeTest, KlIsNonNegative) {
  Rng rng(Seed{6});
  for (int k = 0; k < 200; ++k) {
    const RowVector mu = testing::random_matrix(1, 4, rng, -3.0, 3.0);
    const RowVector logvar = testing::random_matrix(1, 4, rng, -3.0, 3.0);
    EXPECT_GE(gaussian_kl(mu, logvar), 0.0);
  }
  EXPECT_EQ(gaussian_kl(RowVector::Zero(4), RowVector::Zero(4)), 0.0);
}

TEST(VaeTest, ZeroEpochsLeavesModelUnchanged) {
  const VaeModel m = make_vae(10, 1, VaeArchitecture{}, Seed{1});
  const auto result = vae_train(m, UnitSines(20, 10, 1), 0, 8, Seed{2});
  EXPECT_EQ(result.model, m);
  EXPECT_TRUE(result.loss_history.empty());
}

TEST(VaeTest, TrainingIsDeterministicAndReducesLoss) {
  const Dataset ds = UnitSines(64, 10, 3);
  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.batch_size = 16;
  cfg.adam.lr = 1e-3;
  const VaeModel m = make_vae(10, 1, VaeArchitecture{4, {16}, 1.0}, Seed{4});
  const auto a = vae_train(m, ds, cfg, Seed{5});
  const auto b = vae_train(m, ds, cfg, Seed{5});
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_LT(a.loss_history.back(), a.loss_history.front());
}

TEST(VaeTest, GeneratedShapeAndRange) {
  const VaeModel m = make_vae(7, 3, VaeArchitecture{}, Seed{1});
  const Dataset out = vae_generate(m, 11, Seed{2});
  EXPECT_EQ(out.n(), 11u);
  EXPECT_EQ(out.length(), 7u);
  EXPECT_EQ(out.dims(), 3u);
  for (double v : out.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(VaeTest, RejectsUnscaledData) {
  const VaeModel m = make_vae(2, 1, VaeArchitecture{}, Seed{1});
  EXPECT_THROW(vae_train(m, Dataset(1, 2, 1, {0.5, 1.5}), 1, 1, Seed{1}), PreconditionError);
}

TEST(GanTest, HalfProbabilityDiscriminatorGivesLogTwo) {
  GanModel m = make_gan(6, 1, GanArchitecture{}, LabelKind::none, 0, Seed{1});
  PinLastLayer(m.discriminator, RowVector::Zero(1));
  Rng rng(Seed{2});
  const Matrix real = testing::random_matrix(5, 6, rng, 0.0, 1.0);
  const Matrix fake = testing::random_matrix(3, 6, rng, 0.0, 1.0);
  const Matrix none5(5, 0), none3(3, 0);
  EXPECT_NEAR(discriminator_loss(m, real, none5, fake, none3).loss, std::numbers::ln2, 1e-15);
  const Matrix z = standard_normal_matrix(4, 8, rng);
  EXPECT_NEAR(generator_loss(m, z, Matrix(4, 0)).loss, std::numbers::ln2, 1e-15);
}

TEST(GanTest, ConditionalGenerateAttachesTemporalLabels) {
  generators::SineConstParams p;
  const Dataset raw = generators::sine_const_generate(p, 30, 12, 1, Seed{1});
  const Dataset ds = minmax_scale(raw).first;
  GanModel m = make_gan(12, 1, GanArchitecture{}, LabelKind::temporal, 0, Seed{2});
  const auto trained = gan_train(m, ds, 2, 8, Seed{3});
  EXPECT_EQ(trained.d_loss_history.size(), 2u);
  const Dataset out = gan_generate(trained.model, 100, std::nullopt, Seed{4});
  EXPECT_EQ(out.n(), 100u);
  ASSERT_TRUE(out.has_temporal_labels());
  for (std::size_t i = 0; i < out.n(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < ds.n() && !found; ++j) {
      found = std::equal(out.temporal_path(i).begin(), out.temporal_path(i).end(), ds.temporal_path(j).begin());
    }
    EXPECT_TRUE(found);
  }
}

TEST(GanTest, StaticConditioningUsesOneHotLabels) {
  DatasetLabels labels;
  labels.static_labels = std::vector<int>{0, 1, 2, 1};
  const Dataset ds(4, 3, 1, std::vector<double>(12, 0.5), labels);
  const GanModel m = make_gan(3, 1, GanArchitecture{}, LabelKind::static_class, 3, Seed{1});
  const Matrix c = conditions_for(m, ds);
  EXPECT_EQ(c.row(1), (RowVector(3) << 0.0, 1.0, 0.0).finished());
  Matrix wanted = Matrix::Zero(2, 3);
  wanted(0, 2) = 1.0;
  wanted(1, 0) = 1.0;
  const Dataset out = gan_generate(m, 2, wanted, Seed{2});
  EXPECT_EQ(out.static_labels(), (std::vector<int>{2, 0}));
}

TEST(GanTest, LabelConditioningMismatchThrows) {
  const GanModel m = make_gan(4, 1, GanArchitecture{}, LabelKind::temporal, 0, Seed{1});
  EXPECT_THROW(gan_train(m, Dataset(2, 4, 1, std::vector<double>(8, 0.5)), 1, 2, Seed{1}), PreconditionError);
  EXPECT_THROW(gan_generate(m, 3, std::nullopt, Seed{1}), PreconditionError);
}

TEST(GanTest, TrainingIsDeterministic) {
  const Dataset ds = UnitSines(40, 8, 5);
  const GanModel m = make_gan(8, 1, GanArchitecture{4, {16}}, LabelKind::none, 0, Seed{6});
  const auto a = gan_train(m, ds, 5, 16, Seed{7});
  const auto b = gan_train(m, ds, 5, 16, Seed{7});
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.g_loss_history, b.g_loss_history);
}

TEST(CheckpointTest, VaeRoundTripIsExact) {
  const VaeModel m = make_vae(5, 2, VaeArchitecture{3, {7, 4}, 0.5}, Seed{9});
  const auto back = vae_from_json(Json::parse(dump_json(to_json(m))));
  EXPECT_EQ(back, m);
}

TEST(CheckpointTest, GanRoundTripIsExact) {
  generators::SineConstParams p;
  const Dataset ds = minmax_scale(generators::sine_const_generate(p, 10, 6, 1, Seed{1})).first;
  const auto trained = gan_train(make_gan(6, 1, GanArchitecture{}, LabelKind::temporal, 0, Seed{2}), ds, 1, 4, Seed{3});
  const auto back = gan_from_json(Json::parse(dump_json(to_json(trained.model), -1)));
  EXPECT_EQ(back, trained.model);
  EXPECT_THROW(vae_from_json(to_json(trained.model)), ParseError);
}

}  // namespace
}  // namespace tsforge::neural
