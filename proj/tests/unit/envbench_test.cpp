// invgen/tests/unit/envbench_test.cpp

// Copyright 2026  The invgen Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "invgen/common/error.hpp"
#include "invgen/envbench/environment.hpp"
#include "invgen/envbench/worlds.hpp"

namespace invgen::envbench {
namespace {

namespace fs = std::filesystem;

class IdxTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("invgen_idx_" + std::to_string(::testing::UnitTest::GetInstance()
                                               ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(IdxTest, RoundTripScalesPixels) {
  std::vector<std::uint8_t> pixels{0, 255, 51, 102, 7, 8, 9, 10};
  std::vector<std::uint8_t> labels{3, 9};
  WriteIdxImages(Path("img"), 2, 2, pixels);
  WriteIdxLabels(Path("lab"), labels);
  DigitSet set = LoadIdx(Path("img"), Path("lab"));
  ASSERT_EQ(set.xs.rows(), 2u);
  EXPECT_EQ(set.xs.cols(), 4u);
  EXPECT_EQ(set.rows, 2u);
  EXPECT_EQ(set.xs(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(set.xs(0, 2), 0.2);
  EXPECT_EQ(set.digits, (std::vector<int>{3, 9}));
}

TEST_F(IdxTest, HeaderIsBigEndian) {
  std::vector<std::uint8_t> pixels(28 * 28 * 3, 1);
  WriteIdxImages(Path("img"), 28, 28, pixels);
  std::ifstream is(Path("img"), std::ios::binary);
  unsigned char head[16];
  is.read(reinterpret_cast<char*>(head), 16);
  const unsigned char expect[16] = {0, 0, 8, 3, 0, 0, 0, 3, 0, 0, 0, 28, 0, 0, 0, 28};
  for (int i = 0; i < 16; ++i) EXPECT_EQ(head[i], expect[i]) << i;
}

TEST_F(IdxTest, RejectsWrongMagic) {
  std::vector<std::uint8_t> pixels(4, 0);
  WriteIdxImages(Path("img"), 2, 2, pixels);
  // A label file carrying the image magic.
  WriteIdxImages(Path("lab"), 1, 1, std::vector<std::uint8_t>{1});
  EXPECT_THROW(LoadIdx(Path("img"), Path("lab")), DataError);
}

TEST_F(IdxTest, RejectsTruncatedPayload) {
  std::vector<std::uint8_t> pixels(2 * 4, 0);
  WriteIdxImages(Path("img"), 2, 2, pixels);
  WriteIdxLabels(Path("lab"), std::vector<std::uint8_t>{1, 2});
  fs::resize_file(Path("img"), fs::file_size(Path("img")) - 3);
  EXPECT_THROW(LoadIdx(Path("img"), Path("lab")), DataError);
}

TEST_F(IdxTest, RejectsCountMismatch) {
  WriteIdxImages(Path("img"), 2, 2, std::vector<std::uint8_t>(8, 0));
  WriteIdxLabels(Path("lab"), std::vector<std::uint8_t>{1, 2, 3});
  EXPECT_THROW(LoadIdx(Path("img"), Path("lab")), DataError);
}

TEST_F(IdxTest, MissingFile) {
  EXPECT_THROW(LoadIdx(Path("nope"), Path("nope2")), DataError);
}

TEST(SurrogateTest, BalancedAndDeterministic) {
  DigitSet a = MakeSurrogateDigits(1001, 4);
  DigitSet b = MakeSurrogateDigits(1001, 4);
  EXPECT_EQ(a.xs, b.xs);
  EXPECT_EQ(a.digits, b.digits);
  long high = 0;
  for (int d : a.digits) {
    ASSERT_GE(d, 0);
    ASSERT_LE(d, 9);
    high += d >= 5;
  }
  EXPECT_LE(std::abs(2 * high - 1001), 1);
  EXPECT_EQ(a.xs.cols(), 20u);
}

TEST(SurrogateTest, CentroidProbeSeparatesGroups) {
  DigitSet train = MakeSurrogateDigits(1000, 1);
  std::vector<double> mu[2] = {std::vector<double>(20), std::vector<double>(20)};
  double count[2] = {0, 0};
  for (std::size_t i = 0; i < 1000; ++i) {
    const int g = train.digits[i] >= 5;
    count[g] += 1;
    for (int k = 0; k < 20; ++k) mu[g][k] += train.xs(i, k);
  }
  std::vector<double> w(20);
  double bias = 0.0;
  for (int k = 0; k < 20; ++k) {
    mu[0][k] /= count[0];
    mu[1][k] /= count[1];
    w[k] = mu[1][k] - mu[0][k];
    bias -= w[k] * 0.5 * (mu[0][k] + mu[1][k]);
  }
  DigitSet test = MakeSurrogateDigits(1000, 2);
  int correct = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    double s = bias;
    for (int k = 0; k < 20; ++k) s += w[k] * test.xs(i, k);
    correct += (s > 0) == (test.digits[i] >= 5);
  }
  EXPECT_GE(correct / 1000.0, 0.95);
}

double ColorAgreement(const Environment& env) {
  auto flags = ColorFlags(env);
  double agree = 0;
  for (std::size_t i = 0; i < env.size(); ++i) agree += flags[i] == env.ys[i];
  return agree / env.size();
}

TEST(ColoredEnvTest, NoiselessColorPredictsLabel) {
  DigitSet base = MakeSurrogateDigits(3000, 5);
  Environment env = MakeColoredEnv(base, 0.0, 0.0, 2000, 9);
  EXPECT_EQ(env.dim(), 40u);
  EXPECT_EQ(env.meta.at("P_S"), "0");
  EXPECT_EQ(ColorAgreement(env), 1.0);
  // The inactive channel is exactly zero.
  for (std::size_t i = 0; i < env.size(); ++i) {
    const std::size_t off = env.ys[i] ? 20 : 0;
    for (std::size_t k = 0; k < 20; ++k) EXPECT_EQ(env.xs(i, off + k), 0.0);
  }
}

TEST(ColoredEnvTest, HalfFlipRemovesColorInformation) {
  DigitSet base = MakeSurrogateDigits(6000, 6);
  Environment env = MakeColoredEnv(base, 0.5, 0.25, 5000, 10);
  EXPECT_NEAR(ColorAgreement(env), 0.5, 0.02);
}

TEST(ColoredEnvTest, FlipRateWithinThreeSigma) {
  DigitSet base = MakeSurrogateDigits(6000, 7);
  for (double p : {0.1, 0.2, 0.9}) {
    Environment env = MakeColoredEnv(base, p, 0.25, 5000, 11);
    const double mismatch = 1.0 - ColorAgreement(env);
    EXPECT_LE(std::abs(mismatch - p), 3.0 * std::sqrt(p * (1 - p) / 5000)) << p;
  }
}

TEST(ColoredEnvTest, LabelNoiseCapsDigitAccuracy) {
  // The digit group agrees with y with probability 1 - noise = 0.75.
  DigitSet base = MakeSurrogateDigits(20000, 8);
  Environment env = MakeColoredEnv(base, 0.3, 0.25, 20000, 12);
  // Read the digit group off the active channel with a centroid probe.
  auto flags = ColorFlags(env);
  double agree = 0;
  std::vector<double> m0(20), m1(20);
  for (std::size_t i = 0; i < base.xs.rows(); ++i) {
    auto& m = base.digits[i] >= 5 ? m1 : m0;
    for (int k = 0; k < 20; ++k) m[k] += base.xs(i, k);
  }
  for (std::size_t i = 0; i < env.size(); ++i) {
    const std::size_t off = flags[i] ? 0 : 20;
    double s = 0;
    for (int k = 0; k < 20; ++k) s += (m1[k] - m0[k]) * env.xs(i, off + k);
    agree += (s > 0) == (env.ys[i] == 1);
  }
  // Probe error on the shape itself is ~0.6%, so the ceiling shows through.
  EXPECT_NEAR(agree / env.size(), 0.75, 0.02);
}

TEST(ColoredEnvTest, RejectsBadArguments) {
  DigitSet base = MakeSurrogateDigits(100, 1);
  EXPECT_THROW(MakeColoredEnv(base, 1.5, 0.25, 10, 1), std::invalid_argument);
  EXPECT_THROW(MakeColoredEnv(base, 0.5, -0.1, 10, 1), std::invalid_argument);
  EXPECT_THROW(MakeColoredEnv(base, 0.5, 0.25, 101, 1), std::invalid_argument);
}

TEST(ColoredEnvTest, Deterministic) {
  DigitSet base = MakeSurrogateDigits(500, 1);
  Environment a = MakeColoredEnv(base, 0.2, 0.25, 300, 3);
  Environment b = MakeColoredEnv(base, 0.2, 0.25, 300, 3);
  EXPECT_EQ(a.xs, b.xs);
  EXPECT_EQ(a.ys, b.ys);
}

TEST(CounterexampleTest, AnalyticMapValues) {
  EXPECT_EQ(CounterexamplePhi(0.5), 0.5);
  EXPECT_EQ(CounterexampleH(0.5), +1);
  EXPECT_EQ(CounterexamplePhi(3.5), 1.5);
  EXPECT_EQ(CounterexampleH(1.5), -1);
  EXPECT_NEAR(CounterexamplePhi(4.8), 0.2, 1e-15);
  EXPECT_EQ(CounterexampleH(CounterexamplePhi(4.8)), +1);
  EXPECT_EQ(CounterexampleH(1.0), +1);
  EXPECT_THROW(CounterexamplePhi(2.5), std::domain_error);
  EXPECT_THROW(CounterexamplePhi(-0.1), std::domain_error);
  EXPECT_THROW(CounterexamplePhi(5.1), std::domain_error);
}

double SampleBer(const Environment& env) {
  double err[2] = {0, 0}, cnt[2] = {0, 0};
  for (std::size_t i = 0; i < env.size(); ++i) {
    cnt[env.ys[i]] += 1;
    err[env.ys[i]] += CounterexampleClass(env.xs(i, 0)) != env.ys[i];
  }
  return 0.5 * (err[0] / cnt[0] + err[1] / cnt[1]);
}

TEST(CounterexampleTest, SourcesAreSolvedAndTestErrorIsEpsilon) {
  const std::size_t n = 10000;
  auto envs = MakeCounterexampleEnvs(n, 0.2, 3);
  EXPECT_EQ(SampleBer(envs.s1), 0.0);
  EXPECT_EQ(SampleBer(envs.s2), 0.0);
  EXPECT_EQ(CounterexamplePopulationBer(envs.s1), 0.0);
  EXPECT_EQ(CounterexamplePopulationBer(envs.s2), 0.0);
  EXPECT_NEAR(CounterexamplePopulationBer(envs.t), 0.2, 1e-15);
  EXPECT_LE(std::abs(SampleBer(envs.t) - 0.2), 2.0 / std::sqrt(double(n)));
}

TEST(CounterexampleTest, ClassConditionalTvIsEpsilon) {
  for (double eps : {0.05, 0.2, 0.45}) {
    auto envs = MakeCounterexampleEnvs(10, eps);
    for (int c = 0; c < 2; ++c) {
      EXPECT_NEAR(UniformTv(ClassInterval(envs.t, c), ClassInterval(envs.s2, c)),
                  eps, 1e-15);
    }
  }
  EXPECT_DOUBLE_EQ(UniformTv({0, 1}, {2, 3}), 1.0);
  EXPECT_DOUBLE_EQ(UniformTv({0, 2}, {0, 1}), 0.5);
}

TEST(CounterexampleTest, SmallShiftGivesSmallError) {
  auto small = MakeCounterexampleEnvs(1000, 1e-9);
  EXPECT_LT(CounterexamplePopulationBer(small.t), 1e-8);
  EXPECT_THROW(MakeCounterexampleEnvs(10, 0.0), std::invalid_argument);
  EXPECT_THROW(MakeCounterexampleEnvs(10, 0.5), std::invalid_argument);
}

TEST(GaussianEnvTest, ShiftMatchesClosedFormTv) {
  const double delta = 1.3;
  std::vector<GaussianEnvSpec> specs{{{{0.0}, {delta}}, 1.0}};
  auto envs = MakeGaussianEnvs(specs, 200000, 4);
  // For equal-variance Gaussians the optimal set is {x > delta / 2}.
  double above[2] = {0, 0}, cnt[2] = {0, 0};
  for (std::size_t i = 0; i < envs[0].size(); ++i) {
    cnt[envs[0].ys[i]] += 1;
    above[envs[0].ys[i]] += envs[0].xs(i, 0) > delta / 2;
  }
  const double empirical = above[1] / cnt[1] - above[0] / cnt[0];
  const double exact = std::erf(delta / (2.0 * std::sqrt(2.0)));
  EXPECT_NEAR(empirical, exact, 0.02);
}

TEST(GaussianEnvTest, IdenticalSpecsAgreeAndMetaRoundTrips) {
  GaussianEnvSpec spec{{{0.5, -1.0}, {2.0, 0.25}}, 0.7};
  std::vector<GaussianEnvSpec> specs{spec, spec};
  auto envs = MakeGaussianEnvs(specs, 40000, 5);
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < 2; ++k) {
      double m[2] = {0, 0};
      for (int e = 0; e < 2; ++e) {
        double s = 0, n = 0;
        for (std::size_t i = 0; i < envs[e].size(); ++i) {
          if (envs[e].ys[i] != c) continue;
          s += envs[e].xs(i, k);
          n += 1;
        }
        m[e] = s / n;
      }
      EXPECT_NEAR(m[0], m[1], 0.03);
    }
  }
  GaussianEnvSpec back = GaussianSpecFromMeta(envs[1]);
  EXPECT_EQ(back.sigma, spec.sigma);
  EXPECT_EQ(back.class_means, spec.class_means);
  auto again = MakeGaussianEnvs(specs, 100, 5);
  auto first = MakeGaussianEnvs(specs, 100, 5);
  EXPECT_EQ(again[0].xs, first[0].xs);
  std::vector<GaussianEnvSpec> bad{{{{0.0}, {1.0}}, 0.0}};
  EXPECT_THROW(MakeGaussianEnvs(bad, 10, 1), std::invalid_argument);
}

Environment Imbalanced(std::size_t n0, std::size_t n1) {
  Environment env;
  env.name = "imb";
  env.xs = Tensor(n0 + n1, 1);
  for (std::size_t i = 0; i < n0 + n1; ++i) {
    env.ys.push_back(i < n0 ? 0 : 1);
    env.xs(i, 0) = static_cast<double>(i);
  }
  return env;
}

TEST(RebalanceTest, Counts) {
  auto counts = [](const Environment& e) {
    auto idx = e.ClassIndex();
    return std::make_pair(idx[0].size(), idx[1].size());
  };
  Environment even = RebalanceLabels(Imbalanced(30, 30), 1);
  EXPECT_EQ(counts(even), std::make_pair(std::size_t{30}, std::size_t{30}));
  Environment skew = RebalanceLabels(Imbalanced(90, 10), 2, 100);
  EXPECT_EQ(counts(skew), std::make_pair(std::size_t{50}, std::size_t{50}));
  Environment again = RebalanceLabels(Imbalanced(90, 10), 2, 100);
  EXPECT_EQ(skew.xs, again.xs);
  EXPECT_THROW(RebalanceLabels(Imbalanced(10, 0), 1), std::invalid_argument);
}

TEST(EnvironmentCsvTest, HeaderAndRows) {
  Environment env = Imbalanced(1, 1);
  env.name = "e0";
  std::ostringstream os;
  std::vector<Environment> envs{env};
  WriteEnvironmentsCsv(os, envs);
  EXPECT_EQ(os.str(), "env,label,f0\ne0,0,0\ne0,1,1\n");
}

TEST(DiscreteWorldTest, SmoothnessOneCollapsesChannel) {
  DiscreteWorld w = MakeDiscreteWorld(6, 5, 3, 3, 1, 1.0);
  for (std::size_t x = 1; x < w.n_x; ++x) {
    for (std::size_t z = 0; z < w.n_z; ++z) EXPECT_EQ(w.channel(x, z), w.channel(0, z));
  }
}

TEST(DiscreteWorldTest, TablesAreNormalized) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    DiscreteWorld w = MakeDiscreteWorld(2 + seed % 15, 2 + seed % 7, 2 + seed % 3,
                                        2 + seed % 4, seed, 0.1 * (seed % 10),
                                        {seed % 2 == 0, 0.2});
    EXPECT_NO_THROW(w.Validate());
    EXPECT_EQ(w.test_env_index, w.n_env - 1);
    for (std::size_t x = 0; x < w.n_x; ++x) {
      double s = 0;
      for (double v : w.channel.row(x)) s += v;
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
  }
  EXPECT_THROW(MakeDiscreteWorld(1, 4, 2, 2, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(MakeDiscreteWorld(4, 4, 2, 2, 0, 1.5), std::invalid_argument);
}

TEST(DiscreteWorldTest, ValidateCatchesBadRow) {
  DiscreteWorld w = MakeDiscreteWorld(4, 4, 2, 2, 3, 0.0);
  w.channel(0, 0) += 1e-9;
  EXPECT_THROW(w.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace invgen::envbench
