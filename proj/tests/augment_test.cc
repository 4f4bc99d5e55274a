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

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Dense>

#include "gtest/gtest.h"
#include "tsforge/augment/augmentations.hpp"
#include "tsforge/augment/dba.hpp"
#include "tsforge/augment/dtw.hpp"
#include "tsforge/augment/request.hpp"

namespace tsforge::augment {
namespace {

Dataset RandomDataset(std::size_t n, std::size_t length, std::size_t dims, std::uint64_t seed,
                      LabelKind labels = LabelKind::none) {
  Rng rng(Seed{seed});
  std::vector<double> v(n * length * dims);
  for (double& x : v) x = rng.normal();
  DatasetLabels dl;
  if (labels == LabelKind::static_class) {
    dl.static_labels = std::vector<int>(n);
    for (std::size_t i = 0; i < n; ++i) (*dl.static_labels)[i] = static_cast<int>(i % 2);
  } else if (labels == LabelKind::temporal) {
    dl.temporal_labels = std::vector<double>(n * length);
    for (double& y : *dl.temporal_labels) y = static_cast<double>(rng.below(2));
  }
  return Dataset(n, length, dims, std::move(v), std::move(dl));
}

bool IsSourceSeries(const Dataset& source, std::span<const double> series) {
  for (std::size_t i = 0; i < source.n(); ++i) {
    if (std::equal(series.begin(), series.end(), source.series(i).begin())) return true;
  }
  return false;
}

// --- Shape contract shared by all methods ---------------------------------

TEST(AugmentTest, EveryMethodPreservesShapeCountAndFiniteness) {
  for (LabelKind kind : {LabelKind::none, LabelKind::static_class, LabelKind::temporal}) {
    const Dataset ds = RandomDataset(10, 24, 2, 1, kind);
    for (const auto& [method, name] : kMethodNames) {
      AugmentationRequest req;
      req.method = method;
      req.n_new = 13;
      req.seed = Seed{3};
      const Dataset out = run_augmentation(ds, req);
      EXPECT_EQ(out.n(), 13u) << name;
      EXPECT_EQ(out.length(), 24u) << name;
      EXPECT_EQ(out.dims(), 2u) << name;
      EXPECT_EQ(out.label_kind(), kind) << name;
      EXPECT_EQ(out, run_augmentation(ds, req)) << name;
    }
  }
}

// --- gaussian_noise --------------------------------------------------------

TEST(GaussianNoiseTest, ZeroSigmaCopiesSources) {
  const Dataset ds = RandomDataset(10, 8, 2, 2, LabelKind::static_class);
  const Dataset out = gaussian_noise(ds, 0.0, 100, Seed{4});
  EXPECT_EQ(out.n(), 100u);
  for (std::size_t j = 0; j < out.n(); ++j) {
    ASSERT_TRUE(IsSourceSeries(ds, out.series(j)));
  }
}

TEST(GaussianNoiseTest, ResidualStdMatchesSigma) {
  const Dataset ds = RandomDataset(1, 50, 1, 5);
  const Dataset out = gaussian_noise(ds, 1.0, 2000, Seed{6});
  double sum = 0.0, sq = 0.0;
  const double count = static_cast<double>(out.values().size());
  for (std::size_t j = 0; j < out.n(); ++j) {
    for (std::size_t t = 0; t < 50; ++t) {
      const double r = out(j, t, 0) - ds(0, t, 0);
      sum += r;
      sq += r * r;
    }
  }
  EXPECT_NEAR(std::sqrt(sq / count - (sum / count) * (sum / count)), 1.0, 0.02);
}

// --- slice_and_shuffle -----------------------------------------------------

TEST(SliceAndShuffleTest, SingleSliceIsIdentity) {
  const Dataset ds = RandomDataset(4, 10, 2, 7);
  const Dataset out = slice_and_shuffle(ds, 1, 20, Seed{8});
  for (std::size_t j = 0; j < out.n(); ++j) EXPECT_TRUE(IsSourceSeries(ds, out.series(j)));
}

TEST(SliceAndShuffleTest, KernelSwapsTwoPieces) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<std::size_t> cuts = {2};
  const std::vector<std::size_t> swap = {1, 0};
  EXPECT_EQ(shuffle_slices(x, 1, cuts, swap), (std::vector<double>{3, 4, 1, 2}));
}

TEST(SliceAndShuffleTest, OutputsAreEnumeratedRearrangements) {
  // With two slices of [1,2,3,4] the only outcomes are the three cut points
  // combined with the two orders.
  std::set<std::vector<double>> allowed;
  const std::vector<double> x = {1, 2, 3, 4};
  for (std::size_t cut = 1; cut <= 3; ++cut) {
    for (const auto& order : {std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{1, 0}}) {
      const std::vector<std::size_t> cuts = {cut};
      allowed.insert(shuffle_slices(x, 1, cuts, order));
    }
  }
  EXPECT_EQ(allowed.size(), 4u);  // {1,2,3,4}, {2,3,4,1}, {3,4,1,2}, {4,1,2,3}
  const Dataset ds(1, 4, 1, x);
  const Dataset out = slice_and_shuffle(ds, 2, 200, Seed{9});
  std::set<std::vector<double>> seen;
  for (std::size_t j = 0; j < out.n(); ++j) {
    std::vector<double> s(out.series(j).begin(), out.series(j).end());
    EXPECT_TRUE(allowed.count(s));
    seen.insert(s);
  }
  EXPECT_EQ(seen, allowed);
}

TEST(SliceAndShuffleTest, PreservesValueMultisetAndMovesLabelsAlong) {
  const std::size_t length = 15;
  std::vector<double> values(length * 2);
  DatasetLabels dl;
  dl.temporal_labels = std::vector<double>(length);
  for (std::size_t t = 0; t < length; ++t) {
    values[2 * t] = static_cast<double>(t);
    values[2 * t + 1] = 100.0 + static_cast<double>(t);
    (*dl.temporal_labels)[t] = static_cast<double>(t);
  }
  const Dataset ds(1, length, 2, values, dl);
  const Dataset out = slice_and_shuffle(ds, 4, 50, Seed{10});
  for (std::size_t j = 0; j < out.n(); ++j) {
    std::vector<double> f0, f1;
    for (std::size_t t = 0; t < length; ++t) {
      f0.push_back(out(j, t, 0));
      f1.push_back(out(j, t, 1));
      EXPECT_EQ(out.temporal_path(j)[t], out(j, t, 0));
      EXPECT_EQ(out(j, t, 1), out(j, t, 0) + 100.0);
    }
    std::sort(f0.begin(), f0.end());
    for (std::size_t t = 0; t < length; ++t) EXPECT_EQ(f0[t], static_cast<double>(t));
  }
  EXPECT_THROW(slice_and_shuffle(ds, 16, 1, Seed{1}), PreconditionError);
}

// --- flip ------------------------------------------------------------------

TEST(FlipTest, InvolutionInBothModes) {
  const Dataset ds = RandomDataset(5, 9, 3, 11, LabelKind::temporal);
  EXPECT_EQ(flip_all(flip_all(ds, FlipMode::sign), FlipMode::sign), ds);
  EXPECT_EQ(flip_all(flip_all(ds, FlipMode::time), FlipMode::time), ds);
}

TEST(FlipTest, ElementaryCases) {
  const Dataset zeros(1, 3, 1, {0.0, 0.0, 0.0});
  const Dataset flipped = flip(zeros, FlipMode::sign, 2, Seed{1});
  for (double v : flipped.values()) EXPECT_EQ(v, 0.0);
  const Dataset ramp(1, 3, 1, {1.0, 2.0, 3.0});
  const Dataset reversed = flip(ramp, FlipMode::time, 1, Seed{1});
  EXPECT_EQ(std::vector<double>(reversed.values().begin(), reversed.values().end()),
            (std::vector<double>{3.0, 2.0, 1.0}));
}

// --- magnitude_warp --------------------------------------------------------

TEST(MagnitudeWarpTest, TinySigmaIsIdentity) {
  const Dataset ds = RandomDataset(3, 20, 2, 12);
  const Dataset out = magnitude_warp(ds, 4, 1e-15, 10, Seed{13});
  for (std::size_t j = 0; j < out.n(); ++j) {
    bool matched = false;
    for (std::size_t i = 0; i < ds.n() && !matched; ++i) {
      bool close = true;
      for (std::size_t k = 0; k < ds.series_size(); ++k) {
        close = close && std::fabs(out.series(j)[k] - ds.series(i)[k]) < 1e-9;
      }
      matched = close;
    }
    EXPECT_TRUE(matched);
  }
}

TEST(MagnitudeWarpTest, ConstantKnotsScaleUniformly) {
  const Dataset ds = RandomDataset(1, 17, 2, 14);
  const std::vector<double> knots(5, 2.0);
  const auto out = warp_magnitude(ds.series(0), 2, knots);
  for (std::size_t k = 0; k < out.size(); ++k) EXPECT_NEAR(out[k], 2.0 * ds.series(0)[k], 1e-12);
}

TEST(MagnitudeWarpTest, SplineMatchesDenseSolveAndHitsKnots) {
  Rng rng(Seed{15});
  for (std::size_t n_knots : {2, 3, 4, 7}) {
    std::vector<double> xs(n_knots), ys(n_knots);
    double x = 0.0;
    for (std::size_t k = 0; k < n_knots; ++k) {
      x += 0.5 + rng.uniform();
      xs[k] = x;
      ys[k] = rng.normal();
    }
    // Oracle: full n x n system for the second derivatives, natural ends.
    const auto n = static_cast<Eigen::Index>(n_knots);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    a(0, 0) = 1.0;
    a(n - 1, n - 1) = 1.0;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const double h0 = xs[i] - xs[i - 1], h1 = xs[i + 1] - xs[i];
      a(i, i - 1) = h0;
      a(i, i) = 2.0 * (h0 + h1);
      a(i, i + 1) = h1;
      rhs(i) = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
    }
    const Eigen::VectorXd m = a.fullPivLu().solve(rhs);
    std::vector<double> queries;
    for (double q = xs.front(); q <= xs.back(); q += 0.05) queries.push_back(q);
    const auto got = natural_cubic_spline(xs, ys, queries);
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      const double q = queries[qi];
      std::size_t s = 0;
      while (s + 2 < n_knots && q > xs[s + 1]) ++s;
      const double h = xs[s + 1] - xs[s];
      const double A = (xs[s + 1] - q) / h, B = (q - xs[s]) / h;
      const double expected = A * ys[s] + B * ys[s + 1] +
                              ((A * A * A - A) * m(s) + (B * B * B - B) * m(s + 1)) * h * h / 6.0;
      EXPECT_NEAR(got[qi], expected, 1e-10);
    }
    const auto at_knots = natural_cubic_spline(xs, ys, xs);
    for (std::size_t k = 0; k < n_knots; ++k) EXPECT_NEAR(at_knots[k], ys[k], 1e-12);
  }
}

TEST(MagnitudeWarpTest, CurvePassesThroughKnotTimes) {
  const std::vector<double> knots = {1.0, 1.3, 0.7, 1.1};
  const auto curve = magnitude_curve(knots, 31);  // knots at t = 0, 10, 20, 30
  for (std::size_t k = 0; k < knots.size(); ++k) EXPECT_NEAR(curve[10 * k], knots[k], 1e-12);
}

// --- window_warp / window_slice -------------------------------------------

TEST(WindowWarpTest, UnitScaleIsIdentity) {
  const Dataset ds = RandomDataset(3, 30, 2, 16);
  const std::vector<double> scales = {1.0};
  const Dataset out = window_warp(ds, 0.3, scales, 20, Seed{17});
  for (std::size_t j = 0; j < out.n(); ++j) EXPECT_TRUE(IsSourceSeries(ds, out.series(j)));
}

TEST(WindowWarpTest, ConstantInConstantOut) {
  const Dataset ds(2, 25, 1, std::vector<double>(50, 3.25));
  const std::vector<double> scales = {0.5, 2.0, 3.0};
  const Dataset out = window_warp(ds, 0.2, scales, 10, Seed{18});
  for (double v : out.values()) EXPECT_NEAR(v, 3.25, 1e-12);
  EXPECT_THROW(window_warp(ds, 0.05, scales, 1, Seed{1}), PreconditionError);
}

TEST(WindowWarpTest, StretchKernel) {
  // Doubling the window [2, 4) of a ramp of length 6 yields length 8 before
  // resampling back to 6 points.
  const std::vector<double> ramp = {0, 1, 2, 3, 4, 5};
  const auto out = warp_window(ramp, 1, 2, 2, 2.0);
  ASSERT_EQ(out.size(), 6u);
  EXPECT_EQ(out.front(), 0.0);
  EXPECT_EQ(out.back(), 5.0);
  for (std::size_t t = 1; t < out.size(); ++t) EXPECT_GE(out[t], out[t - 1]);
}

TEST(WindowSliceTest, FullRatioIsIdentity) {
  const Dataset ds = RandomDataset(3, 12, 2, 19);
  const Dataset out = window_slice(ds, 1.0, 10, Seed{20});
  for (std::size_t j = 0; j < out.n(); ++j) EXPECT_TRUE(IsSourceSeries(ds, out.series(j)));
}

TEST(WindowSliceTest, RampStaysAffineAndMonotone) {
  std::vector<double> ramp(40);
  for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = 2.0 + 0.5 * t;
  const Dataset ds(1, 40, 1, ramp);
  const Dataset out = window_slice(ds, 0.6, 10, Seed{21});
  for (std::size_t j = 0; j < out.n(); ++j) {
    const double slope = out(j, 1, 0) - out(j, 0, 0);
    EXPECT_GT(slope, 0.0);
    EXPECT_LT(slope, 0.5);
    for (std::size_t t = 1; t < 40; ++t) {
      EXPECT_NEAR(out(j, t, 0) - out(j, t - 1, 0), slope, 1e-9);
    }
  }
}

// --- dtw -------------------------------------------------------------------

TEST(DtwTest, SelfDistanceIsZeroWithDiagonalPath) {
  const Dataset ds = RandomDataset(1, 7, 2, 22);
  const SeriesView x{ds.series(0), 2};
  const auto r = dtw(x, x);
  EXPECT_EQ(r.cost, 0.0);
  ASSERT_EQ(r.path.size(), 7u);
  for (std::size_t t = 0; t < 7; ++t) EXPECT_EQ(r.path[t], std::make_pair(t, t));
}

TEST(DtwTest, HandComputedCases) {
  const std::vector<double> zero = {0.0}, one = {1.0};
  EXPECT_EQ(dtw({zero, 1}, {one, 1}, PointDistance::euclidean).cost, 1.0);
  const std::vector<double> a = {1, 2, 3}, b = {1, 2, 2, 3};
  const auto r = dtw({a, 1}, {b, 1}, PointDistance::euclidean);
  EXPECT_EQ(r.cost, 0.0);
  EXPECT_EQ(r.path.front(), std::make_pair(std::size_t{0}, std::size_t{0}));
  EXPECT_EQ(r.path.back(), std::make_pair(std::size_t{2}, std::size_t{3}));
}

TEST(DtwTest, SymmetricAndBoundedByLockstep) {
  Rng rng(Seed{23});
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset a = RandomDataset(1, 9, 2, rng.next());
    const Dataset b = RandomDataset(1, 9, 2, rng.next());
    for (auto kind : {PointDistance::squared_euclidean, PointDistance::euclidean}) {
      const double ab = dtw({a.series(0), 2}, {b.series(0), 2}, kind).cost;
      const double ba = dtw({b.series(0), 2}, {a.series(0), 2}, kind).cost;
      EXPECT_NEAR(ab, ba, 1e-12);
      double lockstep = 0.0;
      for (std::size_t t = 0; t < 9; ++t) {
        lockstep += point_distance(a.series(0).subspan(2 * t, 2), b.series(0).subspan(2 * t, 2), kind);
      }
      EXPECT_LE(ab, lockstep + 1e-12);
    }
  }
}

TEST(DtwTest, PathIsMonotoneWithUnitSteps) {
  const Dataset a = RandomDataset(1, 11, 1, 24);
  const Dataset b = RandomDataset(1, 6, 1, 25);
  const auto r = dtw({a.series(0), 1}, {b.series(0), 1});
  double recomputed = 0.0;
  for (std::size_t k = 0; k < r.path.size(); ++k) {
    const auto [i, j] = r.path[k];
    recomputed += (a(0, i, 0) - b(0, j, 0)) * (a(0, i, 0) - b(0, j, 0));
    if (k == 0) continue;
    const auto [pi, pj] = r.path[k - 1];
    EXPECT_TRUE((i - pi <= 1) && (j - pj <= 1) && (i + j > pi + pj));
  }
  EXPECT_NEAR(recomputed, r.cost, 1e-12);
}

// --- dba / dtwba -----------------------------------------------------------

TEST(DbaTest, IdenticalMembersReturnTheMember) {
  const Dataset one = RandomDataset(1, 10, 2, 26);
  std::vector<double> repeated;
  for (int k = 0; k < 4; ++k) repeated.insert(repeated.end(), one.values().begin(), one.values().end());
  const Dataset ds(4, 10, 2, repeated);
  const Dataset out = dtwba(ds, 5, DtwbaParams{}, Seed{27});
  for (std::size_t j = 0; j < out.n(); ++j) {
    for (std::size_t k = 0; k < ds.series_size(); ++k) EXPECT_EQ(out.series(j)[k], one.values()[k]);
  }
  std::vector<SeriesView> members(4, SeriesView{one.series(0), 2});
  const std::vector<double> weights = {0.1, 0.2, 0.3, 0.4};
  const auto r = dba(members, weights, 0, 3);
  for (double c : r.cost_history) EXPECT_EQ(c, 0.0);
  EXPECT_TRUE(std::ranges::equal(r.barycenter, one.series(0)));
}

TEST(DbaTest, TwoConstantsAverage) {
  const std::vector<double> c1(12, 1.0), c2(12, 4.0);
  const std::vector<SeriesView> members = {{c1, 1}, {c2, 1}};
  const std::vector<double> weights = {0.5, 0.5};
  const auto r = dba(members, weights, 0, 2);
  for (double v : r.barycenter) EXPECT_DOUBLE_EQ(v, 2.5);
}

TEST(DbaTest, CostNonIncreasingAcrossIterations) {
  Rng rng(Seed{28});
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset ds = RandomDataset(5, 15, 2, rng.next());
    std::vector<SeriesView> members;
    std::vector<double> weights;
    for (std::size_t i = 0; i < 5; ++i) {
      members.push_back({ds.series(i), 2});
      weights.push_back(0.1 + rng.uniform());
    }
    const auto r = dba(members, weights, rng.below(5), 8);
    for (std::size_t k = 1; k < r.cost_history.size(); ++k) {
      EXPECT_LE(r.cost_history[k], r.cost_history[k - 1]);
    }
  }
}

TEST(DtwbaTest, LabelsComeFromSameClassReference) {
  const Dataset ds = RandomDataset(8, 12, 1, 29, LabelKind::static_class);
  const Dataset out = dtwba(ds, 20, DtwbaParams{}, Seed{30});
  std::set<int> labels(out.static_labels().begin(), out.static_labels().end());
  EXPECT_EQ(labels, (std::set<int>{0, 1}));
}

TEST(DtwbaTest, ErrorsOnTooFewSeries) {
  EXPECT_THROW(dtwba(RandomDataset(1, 5, 1, 1), 1, DtwbaParams{}, Seed{1}), PreconditionError);
  DatasetLabels singletons;
  singletons.static_labels = std::vector<int>{0, 1};
  const Dataset two(2, 3, 1, {0, 1, 2, 3, 4, 5}, singletons);
  EXPECT_THROW(dtwba(two, 1, DtwbaParams{}, Seed{1}), PreconditionError);
}

// --- request ---------------------------------------------------------------

TEST(RequestTest, JsonRoundTripAndBadMethod) {
  AugmentationRequest req;
  req.method = Method::window_warp;
  req.n_new = 100;
  req.seed = Seed{7};
  req.params.window_ratio = 0.25;
  req.params.scales = {0.8, 1.25};
  const auto back = augmentation_request_from_json(nlohmann::json::parse(to_json(req).dump()));
  EXPECT_EQ(back.method, Method::window_warp);
  EXPECT_EQ(back.n_new, 100u);
  EXPECT_EQ(back.seed, Seed{7});
  EXPECT_EQ(back.params.window_ratio, 0.25);
  EXPECT_EQ(back.params.scales, req.params.scales);
  try {
    parse_method("rotate");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("dtwba"), std::string::npos);
  }
}

}  // namespace
}  // namespace tsforge::augment
