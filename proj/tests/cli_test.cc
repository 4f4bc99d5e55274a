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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tsforge/cli/commands.hpp"
#include "tsforge/generators/sine_const.hpp"
#include "tsforge/generators/sines.hpp"

namespace tsforge::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tsforge");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("tsforge_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    real_ = Path("real.csv");
    csv::write_dataset_file(real_, generators::sines_generate({}, 40, 16, 2, Seed{1}));
    unsetenv("TSFORGE_SEED");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string real_;
};

// Short series need a statistic set and windows that fit T = 16.
constexpr const char* kSmallStats = R"({"mean": true, "std": true, "acf_lags": [1, 2], "band_power": 2})";

TEST_F(CliTest, GenKeepsShapeAndWritesLossHistory) {
  const auto r = Cli({"gen", "--architecture-type=gan", "--n-epochs=3", "--latent-dim=8", "--source-data=" + real_,
                      "--dest-data=" + Path("synth.csv"), "--n-samples=25"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset synth = csv::read_dataset_file(Path("synth.csv"));
  EXPECT_EQ(synth.n(), 25u);
  EXPECT_EQ(synth.length(), 16u);
  EXPECT_EQ(synth.dims(), 2u);
  const std::string history = Slurp(Path("synth.csv.loss_history.csv"));
  EXPECT_TRUE(history.starts_with("epoch,d_loss,g_loss\n"));
  EXPECT_EQ(std::count(history.begin(), history.end(), '\n'), 4);
}

TEST_F(CliTest, ZeroEpochsStillWritesValidCsv) {
  for (const std::string arch : {"vae", "gan"}) {
    const auto r = Cli({"gen", "--architecture-type", arch, "--n-epochs", "0", "--source-data", real_, "--dest-data",
                        Path(arch + ".csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(csv::read_dataset_file(Path(arch + ".csv")).n(), 40u);
  }
}

TEST_F(CliTest, GenIsByteDeterministic) {
  for (int run = 0; run < 2; ++run) {
    const auto r = Cli({"--seed=11", "gen", "--n-epochs=4", "--source-data=" + real_,
                        "--dest-data=" + Path("s" + std::to_string(run) + ".csv")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(Slurp(Path("s0.csv")), Slurp(Path("s1.csv")));
  EXPECT_EQ(Slurp(Path("s0.csv.loss_history.csv")), Slurp(Path("s1.csv.loss_history.csv")));
  ASSERT_EQ(Cli({"--seed=12", "gen", "--n-epochs=4", "--source-data=" + real_, "--dest-data=" + Path("s2.csv")}).code,
            0);
  EXPECT_NE(Slurp(Path("s0.csv")), Slurp(Path("s2.csv")));
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
  setenv("TSFORGE_SEED", "11", 1);
  ASSERT_EQ(Cli({"gen", "--n-epochs=4", "--source-data=" + real_, "--dest-data=" + Path("env.csv")}).code, 0);
  unsetenv("TSFORGE_SEED");
  ASSERT_EQ(Cli({"--seed", "11", "gen", "--n-epochs=4", "--source-data=" + real_, "--dest-data=" + Path("flag.csv")})
                .code,
            0);
  EXPECT_EQ(Slurp(Path("env.csv")), Slurp(Path("flag.csv")));
  setenv("TSFORGE_SEED", "eleven", 1);
  EXPECT_EQ(Cli({"gen", "--source-data=" + real_, "--dest-data=" + Path("x.csv")}).code, 2);
  unsetenv("TSFORGE_SEED");
}

TEST_F(CliTest, ConditionalGanUsesLabelFile) {
  const Dataset labelled = generators::sine_const_generate({}, 30, 12, 1, Seed{2});
  csv::write_dataset_file(Path("sc.csv"), without_labels(labelled));
  {
    std::ofstream labels(Path("labels.csv"));
    labels << "series_id,t,label\n";
    for (std::size_t i = 0; i < labelled.n(); ++i) {
      for (std::size_t t = 0; t < labelled.length(); ++t) {
        labels << i << ',' << t << ',' << csv::format_real(labelled.temporal_path(i)[t]) << '\n';
      }
    }
  }
  const auto r = Cli({"gen", "--architecture-type=cgan", "--n-epochs=2", "--source-data=" + Path("sc.csv"),
                      "--source-data-labels=" + Path("labels.csv"), "--dest-data=" + Path("c.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(csv::read_dataset_file(Path("c.csv")).has_temporal_labels());
  EXPECT_EQ(Cli({"gen", "--architecture-type=cgan", "--source-data=" + Path("sc.csv"), "--dest-data=" + Path("d.csv")})
                .code,
            2);
}

TEST_F(CliTest, SimulatorArchitectureFitsAndSamples) {
  std::ofstream(Path("stats.json")) << kSmallStats;
  const auto r = Cli({"gen", "--architecture-type=simulator:gp", "--abc-budget=5", "--abc-sim-batch=2",
                      "--stat-config=" + Path("stats.json"), "--source-data=" + real_, "--dest-data=" + Path("g.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("lengthscale="), std::string::npos);
  EXPECT_EQ(csv::read_dataset_file(Path("g.csv")).n(), 40u);
  EXPECT_EQ(Cli({"gen", "--architecture-type=simulator:nope", "--source-data=" + real_, "--dest-data=" + Path("n.csv")})
                .code,
            2);
}

TEST_F(CliTest, EvalOnIdenticalFilesGivesZeroDistanceAndSkipsPrivacy) {
  std::ofstream(Path("stats.json")) << kSmallStats;
  const auto r = Cli({"eval", "--source-data=" + real_, "--synthetic-data=" + real_, "--report=" + Path("r.json"),
                      "--stat-config=" + Path("stats.json"), "--consistency-windows=2,4", "--dg-window=4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = metrics::report_from_json(nlohmann::ordered_json::parse(Slurp(Path("r.json"))));
  ASSERT_EQ(report.entries().size(), 5u);
  EXPECT_EQ(*report.at("distance").score, 0.0);
  EXPECT_TRUE(report.at("privacy").skipped.has_value());
  EXPECT_NE(r.out.find("privacy: skipped"), std::string::npos);
  EXPECT_NE(r.out.find("distance: 0 (lower_better)"), std::string::npos);
}

TEST_F(CliTest, EvalWithHoldoutScoresPrivacy) {
  csv::write_dataset_file(Path("hold.csv"), generators::sines_generate({}, 10, 16, 2, Seed{9}));
  std::ofstream(Path("stats.json")) << kSmallStats;
  const auto r = Cli({"eval", "--source-data=" + real_, "--synthetic-data=" + real_, "--holdout=" + Path("hold.csv"),
                      "--report=" + Path("r.json"), "--summary-csv=" + Path("r.csv"),
                      "--stat-config=" + Path("stats.json"), "--consistency-windows=2,4", "--dg-window=4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = metrics::report_from_json(nlohmann::ordered_json::parse(Slurp(Path("r.json"))));
  EXPECT_TRUE(report.at("privacy").score.has_value());
  EXPECT_TRUE(Slurp(Path("r.csv")).starts_with("distance,diversity,consistency,downstream_gain,privacy,config_digest\n"));
}

TEST_F(CliTest, EvalShapeMismatchIsUsageError) {
  csv::write_dataset_file(Path("other.csv"), generators::sines_generate({}, 10, 16, 3, Seed{9}));
  const auto r = Cli({"eval", "--source-data=" + real_, "--synthetic-data=" + Path("other.csv"),
                      "--report=" + Path("r.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, AugmentZeroNoiseAppendsExactCopies) {
  const auto r = Cli({"augment", "--method=gaussian_noise", "--sigma=0", "--n-new=5", "--source-data=" + real_,
                      "--dest-data=" + Path("aug.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset src = csv::read_dataset_file(real_);
  const Dataset out = csv::read_dataset_file(Path("aug.csv"));
  ASSERT_EQ(out.n(), 45u);
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_TRUE(std::ranges::equal(out.series(i), src.series(i)));
  }
  for (std::size_t i = 40; i < 45; ++i) {
    bool matches_some = false;
    for (std::size_t j = 0; j < 40 && !matches_some; ++j) matches_some = std::ranges::equal(out.series(i), src.series(j));
    EXPECT_TRUE(matches_some) << "new series " << i << " is not a copy";
  }
}

TEST_F(CliTest, AugmentDtwbaRowCount) {
  csv::write_dataset_file(Path("ten.csv"), generators::sines_generate({}, 10, 16, 1, Seed{4}));
  const auto r = Cli({"augment", "--method=dtwba", "--n-new=100", "--n-iters=2", "--source-data=" + Path("ten.csv"),
                      "--dest-data=" + Path("aug.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Dataset out = csv::read_dataset_file(Path("aug.csv"));
  EXPECT_EQ(out.n(), 110u);
  EXPECT_EQ(out.length(), 16u);
  EXPECT_EQ(Slurp(Path("aug.csv")).find("\n"), std::string("series_id,t,f0").size());
}

TEST_F(CliTest, AugmentRequestFileAndBadMethod) {
  std::ofstream(Path("req.json")) << R"({"method": "flip", "n_new": 3, "seed": 1, "params": {"mode": "time"}})";
  ASSERT_EQ(Cli({"augment", "--request=" + Path("req.json"), "--source-data=" + real_, "--dest-data=" + Path("a.csv")})
                .code,
            0);
  EXPECT_EQ(csv::read_dataset_file(Path("a.csv")).n(), 43u);
  const auto bad = Cli({"augment", "--method=teleport", "--source-data=" + real_, "--dest-data=" + Path("b.csv")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("window_warp"), std::string::npos);
}

TEST_F(CliTest, EmbedPcaAndTsneRowCounts) {
  csv::write_dataset_file(Path("syn.csv"), generators::sines_generate({}, 20, 16, 2, Seed{5}));
  ASSERT_EQ(Cli({"embed", "--method=pca", "--source-data=" + real_, "--synthetic-data=" + Path("syn.csv"),
                 "--dest-data=" + Path("e.csv"), "--diagnostics=" + Path("d.json"), "--spectrum=" + Path("s.csv")})
                .code,
            0);
  const std::string csv_text = Slurp(Path("e.csv"));
  EXPECT_EQ(std::count(csv_text.begin(), csv_text.end(), '\n'), 61);
  EXPECT_TRUE(csv_text.starts_with("x,y,tag\n"));
  EXPECT_NE(Slurp(Path("d.json")).find("explained_variance_1"), std::string::npos);
  EXPECT_TRUE(Slurp(Path("s.csv")).starts_with("bin,feature,real,synthetic\n"));

  ASSERT_EQ(Cli({"embed", "--method=tsne", "--perplexity=5", "--n-iter=300", "--source-data=" + real_,
                 "--synthetic-data=" + Path("syn.csv"), "--dest-data=" + Path("t.csv")})
                .code,
            0);
  const std::string tsne_text = Slurp(Path("t.csv"));
  EXPECT_EQ(std::count(tsne_text.begin(), tsne_text.end(), '\n'), 61);
  EXPECT_EQ(Cli({"embed", "--method=tsne", "--perplexity=30", "--source-data=" + real_, "--dest-data=" + Path("u.csv")})
                .code,
            2);
  EXPECT_EQ(Cli({"embed", "--method=umap", "--source-data=" + real_, "--dest-data=" + Path("u.csv")}).code, 2);
}

TEST_F(CliTest, HelpListsDefaultsAndUsageErrorsExitTwo) {
  for (const std::string cmd : {"gen", "eval", "augment", "embed"}) {
    const auto r = Cli({cmd, "--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("--source-data"), std::string::npos) << cmd;
  }
  EXPECT_NE(Cli({"gen", "--help"}).out.find("[100]"), std::string::npos);
  EXPECT_NE(Cli({"embed", "--help"}).out.find("[30]"), std::string::npos);
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"gen"}).code, 2);
  EXPECT_EQ(Cli({"gen", "--source-data=" + Path("missing.csv"), "--dest-data=" + Path("x.csv")}).code, 2);
  EXPECT_EQ(Cli({"gen", "--architecture-type=rnn", "--source-data=" + real_, "--dest-data=" + Path("x.csv")}).code,
            2);
}

TEST_F(CliTest, NumericFailureExitsThree) {
  // A learning rate this large drives the discriminator to overflow.
  const auto r = Cli({"gen", "--architecture-type=gan", "--learning-rate=1e300", "--n-epochs=5",
                      "--source-data=" + real_, "--dest-data=" + Path("x.csv")});
  EXPECT_EQ(r.code, 3) << r.err;
}

}  // namespace
}  // namespace tsforge::cli
