// invgen/tests/unit/theory_test.cpp

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
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "invgen/common/rng.hpp"
#include "invgen/theory/bounds.hpp"
#include "invgen/theory/distances.hpp"
#include "invgen/theory/suites.hpp"

namespace invgen::theory {
namespace {

using diffcore::Activation;
using diffcore::Layer;

std::vector<double> RandomSimplex(std::size_t n, CounterRng& rng) {
  std::vector<double> p(n);
  double s = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.Uniform());
    s += v;
  }
  for (double& v : p) v /= s;
  return p;
}

Network Linear(const Tensor& a) {
  return Network({Layer{a, Tensor(a.rows(), 1), Activation::kIdentity}});
}

// Two-environment world on two inputs and latents, built by hand.
DiscreteWorld TinyWorld(const Tensor& channel, const Tensor& env0,
                        const Tensor& env1) {
  DiscreteWorld w;
  w.n_x = channel.rows();
  w.n_z = channel.cols();
  w.n_y = env0.rows();
  w.n_env = 2;
  w.px_given_y = {env0, env1};
  w.py = {std::vector<double>(w.n_y, 1.0 / w.n_y),
          std::vector<double>(w.n_y, 1.0 / w.n_y)};
  w.channel = channel;
  w.test_env_index = 1;
  return w;
}

// --------------------------------------------------------------------------
// distances

TEST(TvDiscreteTest, KnownValues) {
  const std::vector<double> p{0.3, 0.7}, q{0.3, 0.7};
  EXPECT_EQ(TvDiscrete(p, q), 0.0);
  EXPECT_EQ(TvDiscrete(std::vector<double>{1, 0, 0}, std::vector<double>{0, 0.5, 0.5}),
            1.0);
  EXPECT_NEAR(TvDiscrete(std::vector<double>{0.8, 0.2}, std::vector<double>{0.1, 0.9}),
              0.7, 1e-15);
}

TEST(TvDiscreteTest, RejectsNonDistributions) {
  const std::vector<double> ok{0.5, 0.5};
  EXPECT_THROW(TvDiscrete(std::vector<double>{0.5, 0.6}, ok), std::invalid_argument);
  EXPECT_THROW(TvDiscrete(std::vector<double>{1.5, -0.5}, ok), std::invalid_argument);
  EXPECT_THROW(TvDiscrete(std::vector<double>{1.0}, ok), std::invalid_argument);
}

TEST(TvDiscreteTest, MetricOnRandomTriples) {
  CounterRng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + rng.Index(10);
    const auto p = RandomSimplex(n, rng), q = RandomSimplex(n, rng),
               r = RandomSimplex(n, rng);
    const double pq = TvDiscrete(p, q);
    EXPECT_EQ(pq, TvDiscrete(q, p));
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0);
    EXPECT_LE(pq, TvDiscrete(p, r) + TvDiscrete(r, q) + 1e-15);
  }
}

TEST(GaussianDistanceTest, HellingerClosedForm) {
  const std::vector<double> a{0.0}, b{2.0};
  EXPECT_EQ(HellingerGaussian(a, a, 1.0, 1), 0.0);
  const double h = std::sqrt(1.0 - std::exp(-0.5));
  EXPECT_NEAR(HellingerGaussian(a, b, 1.0, 1), h, 1e-15);
  EXPECT_NEAR(HellingerGaussian(a, b, 1.0, 1), 0.627271, 1e-6);
  EXPECT_NEAR(TvGaussianBound(a, b, 1.0, 1), std::numbers::sqrt2 * h, 1e-15);
  EXPECT_EQ(TvGaussianBound(a, a, 1.0, 1), 0.0);
  // The 1/d in the exponent: d = 4 with |dmu|^2 = 4 gives exponent 1/8.
  EXPECT_NEAR(HellingerGaussian(a, b, 1.0, 4), std::sqrt(1.0 - std::exp(-0.125)),
              1e-15);
  EXPECT_THROW(HellingerGaussian(a, b, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(TvGaussianBound(a, b, -1.0, 1), std::invalid_argument);
  EXPECT_THROW(HellingerGaussian(a, b, 1.0, 0), std::invalid_argument);
}

TEST(GaussianDistanceTest, HellingerMonotoneInDistance) {
  double prev = -1.0;
  for (int i = 0; i <= 50; ++i) {
    const std::vector<double> a{0.0, 0.0}, b{0.2 * i, 0.0};
    const double h = HellingerGaussian(a, b, 0.7, 2);
    EXPECT_GE(h, prev);
    prev = h;
  }
}

TEST(GaussianDistanceTest, MonteCarloMatchesErfAndStaysUnderBoundInOneDim) {
  for (double delta : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const std::vector<double> a{0.3}, b{0.3 + delta};
    const double mc = TvGaussianMonteCarlo(a, b, 1.0, 100000, 7);
    // Phi(delta/2) - Phi(-delta/2) via the normal CDF.
    const double exact = std::erfc(-delta / (2 * std::numbers::sqrt2)) / 2 -
                         std::erfc(delta / (2 * std::numbers::sqrt2)) / 2;
    EXPECT_NEAR(TvGaussianExact(a, b, 1.0), exact, 1e-14);
    EXPECT_NEAR(mc, exact, 0.01) << delta;
    EXPECT_GE(TvGaussianBound(a, b, 1.0, 1), mc - 0.02) << delta;
  }
}

TEST(DobrushinTest, ExactOnSmallChannels) {
  EXPECT_EQ(DobrushinExact(Tensor::FromRows({{0.2, 0.8}, {0.2, 0.8}, {0.2, 0.8}})),
            0.0);
  EXPECT_EQ(DobrushinExact(Tensor::Identity(5)), 1.0);
  // Pairwise by hand: rows 0-1 -> 0.5, rows 0-2 -> 0.8, rows 1-2 -> 0.3.
  const Tensor k = Tensor::FromRows({{0.5, 0.5, 0.0}, {0.2, 0.3, 0.5}, {0.1, 0.1, 0.8}});
  EXPECT_NEAR(DobrushinExact(k), 0.8, 1e-15);
  EXPECT_THROW(DobrushinExact(Tensor::FromRows({{0.5, 0.6}})), std::invalid_argument);
}

TEST(DobrushinTest, LipschitzBound) {
  EXPECT_EQ(DobrushinLipschitzBound(0.0, 3.0, 2, 1.0), 0.0);
  EXPECT_NEAR(DobrushinLipschitzBound(std::sqrt(8 * std::log(2.0)), 1.0, 1, 1.0), 1.0,
              1e-15);
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double v = DobrushinLipschitzBound(0.25 * i, 1.5, 3, 0.8);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_THROW(DobrushinLipschitzBound(1.0, 1.0, 1, 0.0), std::invalid_argument);
  EXPECT_THROW(DobrushinLipschitzBound(1.0, 1.0, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(DobrushinLipschitzBound(1.0, -1.0, 1, 1.0), std::invalid_argument);
  EXPECT_THROW(DobrushinLipschitzBound(-1.0, 1.0, 1, 1.0), std::invalid_argument);
}

TEST(LipschitzTest, SpectralNormMatchesTwoByTwoClosedForm) {
  const Tensor a = Tensor::FromRows({{1.0, 2.0}, {-0.5, 3.0}});
  // Largest eigenvalue of a^T a from the quadratic formula.
  const double p = 1.0 + 0.25, q = 2.0 - 1.5, r = 4.0 + 9.0;
  const double top = (p + r) / 2 + std::sqrt((p - r) * (p - r) / 4 + q * q);
  EXPECT_NEAR(SpectralNorm(a), std::sqrt(top), 1e-12);
}

TEST(LipschitzTest, LinearMapApproachesSpectralNormFromBelow) {
  const Tensor a = Tensor::FromRows({{1.0, 2.0}, {-0.5, 3.0}, {0.3, 0.1}});
  const double l = SpectralNorm(a);
  CounterRng rng(5);
  double prev = 0.0;
  for (std::size_t n : {4u, 32u, 256u}) {
    Tensor xs(n, 2);
    for (double& v : xs.data()) v = 2 * rng.Uniform() - 1;
    const double hat = LipschitzEmpirical(Linear(a), xs);
    EXPECT_LE(hat, l + 1e-12);
    prev = hat;
  }
  EXPECT_GT(prev, 0.99 * l);
}

TEST(LipschitzTest, ConstantAndScaling) {
  Tensor xs = Tensor::FromRows({{0, 0}, {1, 2}, {-1, 3}});
  EXPECT_EQ(LipschitzEmpirical(Linear(Tensor(2, 2)), xs), 0.0);
  const Tensor a = Tensor::FromRows({{0.3, -1.0}, {2.0, 0.5}});
  Tensor scaled = a;
  for (double& v : scaled.data()) v *= -2.5;
  EXPECT_NEAR(LipschitzEmpirical(Linear(scaled), xs),
              2.5 * LipschitzEmpirical(Linear(a), xs), 1e-12);
  EXPECT_THROW(LipschitzEmpirical(Linear(a), Tensor::FromRows({{1, 1}, {1, 1}})),
               std::invalid_argument);
  EXPECT_THROW(LipschitzEmpirical(Linear(a), Tensor::FromRows({{1, 1}})),
               std::invalid_argument);
}

// --------------------------------------------------------------------------
// Theorem 1

// Independent BER: sum over (y, x, z) with explicit conditionals.
double BruteBer(const DiscreteWorld& w, std::size_t env, const std::vector<int>& h) {
  double total = 0.0;
  for (std::size_t y = 0; y < w.n_y; ++y) {
    double err = 0.0;
    for (std::size_t x = 0; x < w.n_x; ++x) {
      for (std::size_t z = 0; z < w.n_z; ++z) {
        if (h[z] != static_cast<int>(y)) err += w.px_given_y[env](y, x) * w.channel(x, z);
      }
    }
    total += err / w.n_y;
  }
  return total;
}

TEST(Theorem1Test, ConstantChannelCollapsesToSourceAverage) {
  auto w = envbench::MakeDiscreteWorld(6, 5, 3, 3, 21, 1.0);
  ASSERT_EQ(DobrushinExact(w.channel), 0.0);
  const std::vector<int> h{0, 1, 2, 1, 0};
  const BoundReport r = Theorem1Verify(w, h);
  EXPECT_NEAR(r.lhs, r.Term("avg_source_ber"), 1e-15);
  EXPECT_EQ(r.Term("alpha_tv"), 0.0);
  EXPECT_NEAR(r.slack, r.Term("kappa"), 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(Theorem1Test, TestEqualToASourceGivesZeroEpsilon) {
  auto w = envbench::MakeDiscreteWorld(7, 6, 2, 3, 22, 0.2);
  w.px_given_y[2] = w.px_given_y[1];
  const std::vector<int> h{0, 1, 1, 0, 0, 1};
  const BoundReport r = Theorem1Verify(w, h);
  EXPECT_EQ(r.Term("epsilon"), 0.0);
  EXPECT_EQ(r.Term("rhs_total"), r.Term("avg_source_ber") + r.Term("kappa"));
  EXPECT_TRUE(r.holds);
}

TEST(Theorem1Test, TermsMatchBruteForceEnumeration) {
  CounterRng rng(23);
  for (int k = 0; k < 50; ++k) {
    auto w = envbench::MakeDiscreteWorld(2 + rng.Index(8), 2 + rng.Index(8),
                                         2 + rng.Index(3), 2 + rng.Index(4), rng(),
                                         rng.Uniform());
    std::vector<int> h(w.n_z);
    for (int& c : h) c = static_cast<int>(rng.Index(w.n_y));
    const BoundReport r = Theorem1Verify(w, h);
    EXPECT_NEAR(r.lhs, BruteBer(w, w.test_env_index, h), 1e-13);
    double avg = 0.0;
    for (std::size_t t = 0; t + 1 < w.n_env; ++t) avg += BruteBer(w, t, h);
    EXPECT_NEAR(r.Term("avg_source_ber"), avg / (w.n_env - 1), 1e-13);
    EXPECT_EQ(r.Term("rhs_total"), r.Term("avg_source_ber") + r.Term("kappa") +
                                       r.Term("alpha_tv") * r.Term("epsilon"));
    EXPECT_EQ(r.slack, r.Term("rhs_total") - r.lhs);
  }
}

TEST(Theorem1Test, RejectsBadDecisionTable) {
  auto w = envbench::MakeDiscreteWorld(3, 3, 2, 2, 24, 0.0);
  EXPECT_THROW(Theorem1Verify(w, std::vector<int>{0, 1}), std::invalid_argument);
  EXPECT_THROW(Theorem1Verify(w, std::vector<int>{0, 1, 2}), std::invalid_argument);
  EXPECT_THROW(BoundReport{}.Term("kappa"), std::out_of_range);
}

TEST(Theorem1Test, RandomSuiteHasNoViolations) {
  const SuiteSummary s = RunTheorem1Suite(1000, 31);
  EXPECT_EQ(s.instances, 1000u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_GE(s.worst_slack, -kBoundTolerance);
}

// --------------------------------------------------------------------------
// Lemma 1

TEST(Lemma1Test, HandWorkedExample) {
  // Identity channel; env0 separates classes, env1 mixes class 0.
  const DiscreteWorld w =
      TinyWorld(Tensor::Identity(2), Tensor::FromRows({{1, 0}, {0, 1}}),
                Tensor::FromRows({{0.5, 0.5}, {0, 1}}));
  const Lemma1Report r = Lemma1Verify(w);
  EXPECT_NEAR(r.kappa, 0.5, 1e-15);
  // Marginals (0.5, 0.5) vs (0.25, 0.75).
  EXPECT_NEAR(r.marginal_gap, 0.25, 1e-15);
  EXPECT_NEAR(r.marginal_gap_l1, 0.5, 1e-15);
  // S(y=0|z): (1, 0) vs (1, 1/3); tightest pair uses C1 = 1, rhs = 1.5.
  EXPECT_NEAR(r.label_cond_gap, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(r.c1, 1.0, 1e-15);
  EXPECT_NEAR(r.c_plus_kappa, 1.5, 1e-15);
  EXPECT_NEAR(r.label_slack, 1.5 - 1.0 / 6.0, 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(Lemma1Test, IdenticalEnvironmentsHaveZeroGaps) {
  auto w = envbench::MakeDiscreteWorld(5, 4, 3, 3, 41, 0.3, {.balanced = true});
  w.px_given_y[1] = w.px_given_y[0];
  w.px_given_y[2] = w.px_given_y[0];
  const Lemma1Report r = Lemma1Verify(w);
  EXPECT_EQ(r.kappa, 0.0);
  EXPECT_EQ(r.marginal_gap, 0.0);
  EXPECT_EQ(r.label_gap_l1, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Lemma1Test, Preconditions) {
  auto unbalanced = envbench::MakeDiscreteWorld(4, 4, 2, 2, 42, 0.0);
  EXPECT_THROW(Lemma1Verify(unbalanced), std::invalid_argument);
  const DiscreteWorld disjoint =
      TinyWorld(Tensor::Identity(2), Tensor::FromRows({{1, 0}, {1, 0}}),
                Tensor::FromRows({{0, 1}, {0, 1}}));
  EXPECT_THROW(Lemma1Verify(disjoint), std::domain_error);
}

TEST(Lemma1Test, RandomSuiteHasNoViolations) {
  const SuiteSummary s = RunLemma1Suite(500, 43);
  EXPECT_EQ(s.instances, 500u);
  EXPECT_EQ(s.violations, 0u);
}

// --------------------------------------------------------------------------
// SDPI

TEST(SdpiTest, HandWorkedChannel) {
  const Tensor k = Tensor::FromRows({{0.9, 0.1}, {0.2, 0.8}});
  SdpiReport r = SdpiVerify(k, std::vector<double>{1, 0}, std::vector<double>{0, 1});
  EXPECT_NEAR(r.alpha, 0.7, 1e-15);
  EXPECT_NEAR(r.tv_out, 0.7, 1e-15);
  r = SdpiVerify(k, std::vector<double>{0.5, 0.5}, std::vector<double>{1, 0});
  EXPECT_NEAR(r.tv_in, 0.5, 1e-15);
  EXPECT_NEAR(r.tv_out, 0.35, 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(SdpiTest, EqualInputsAndIdentity) {
  const Tensor k = Tensor::FromRows({{0.9, 0.1}, {0.2, 0.8}});
  const std::vector<double> p{0.3, 0.7};
  SdpiReport r = SdpiVerify(k, p, p);
  EXPECT_EQ(r.tv_in, 0.0);
  EXPECT_EQ(r.tv_out, 0.0);
  r = SdpiVerify(Tensor::Identity(3), std::vector<double>{0.2, 0.3, 0.5},
                 std::vector<double>{0.6, 0.1, 0.3});
  EXPECT_EQ(r.alpha, 1.0);
  EXPECT_EQ(r.tv_out, r.tv_in);
  EXPECT_THROW(SdpiVerify(k, std::vector<double>{1, 0, 0}, p), std::invalid_argument);
}

TEST(SdpiTest, RandomSuiteHasNoViolations) {
  const SuiteSummary s = RunSdpiSuite(1000, 51);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_EQ(s.Extra("identity_max_gap"), 0.0);
  EXPECT_EQ(s.Extra("identity_alpha_min"), 1.0);
}

// --------------------------------------------------------------------------
// Lemma 2

TEST(Lemma2Test, OneDimensionalChannelMatchesClosedForm) {
  GaussianChannelConfig cfg{Tensor::FromRows({{-1.5}}), 0.8, 1.2};
  const Lemma2Report r = Lemma2Verify(cfg, 3, 100000, 61);
  EXPECT_NEAR(r.l_true, 1.5, 1e-12);
  EXPECT_NEAR(r.l_hat, 1.5, 1e-12);
  EXPECT_NEAR(r.d_max, 1.2, 1e-15);
  EXPECT_NEAR(r.tv_exact, std::erf(1.5 * 1.2 / (2 * std::numbers::sqrt2 * 0.8)), 1e-15);
  EXPECT_NEAR(r.tv_mc, r.tv_exact, 0.01);
  EXPECT_EQ(r.bound, r.bound_without_d);
  EXPECT_TRUE(r.holds);
}

TEST(Lemma2Test, DivisionByDimensionCanUndercutTrueTv) {
  // One informative latent axis out of four: exact TV erf(1/sqrt(2)) ~ 0.683
  // against sqrt(2) (1 - exp(-1/8))^(1/2) ~ 0.485 from the 1/d form.
  GaussianChannelConfig cfg{Tensor::FromRows({{1.0}, {0.0}, {0.0}, {0.0}}), 1.0, 2.0};
  const Lemma2Report r = Lemma2Verify(cfg, 3, 100000, 62);
  EXPECT_NEAR(r.tv_exact, std::erf(1.0 / std::numbers::sqrt2), 1e-15);
  EXPECT_NEAR(r.bound, std::numbers::sqrt2 * std::sqrt(1.0 - std::exp(-0.125)), 1e-15);
  EXPECT_FALSE(r.holds);
  EXPECT_TRUE(r.holds_without_d);
}

TEST(Lemma2Test, SuiteReportsViolationsOnlyAboveOneDimension) {
  const SuiteSummary s = RunLemma2Suite(30, 63, 20000);
  EXPECT_EQ(s.instances, 30u);
  EXPECT_EQ(s.Extra("violations_d1"), 0.0);
  EXPECT_EQ(s.Extra("violations_without_d"), 0.0);
}

// --------------------------------------------------------------------------
// Augmentation Taylor

TEST(TaylorTest, HandWorkedOneDimensionalCloud) {
  // phi = identity, w = 1, two samples at -1 and +1 with y = +1.
  const std::vector<double> w{1.0};
  const Tensor xs = Tensor::FromRows({{-1.0}, {1.0}});
  const TaylorReport r =
      AugmentationTaylorVerify(w, Linear(Tensor::Identity(1)), xs, std::vector<int>{1, 1});
  EXPECT_NEAR(r.r_aug, (std::log1p(std::exp(1.0)) + std::log1p(std::exp(-1.0))) / 2,
              1e-15);
  EXPECT_NEAR(r.g1, std::log(2.0), 1e-15);
  EXPECT_NEAR(r.g2, 0.125, 1e-15);
  EXPECT_NEAR(r.half_var_pred, 0.5, 1e-15);
  EXPECT_NEAR(r.var_x, 1.0, 1e-15);
  EXPECT_NEAR(r.lipschitz_hat, 1.0, 1e-15);
  EXPECT_NEAR(r.var_bound, 0.25, 1e-15);
  EXPECT_NEAR(r.max_second_deriv, 0.25, 1e-15);
  EXPECT_TRUE(r.holds_pair);
}

TEST(TaylorTest, IdenticalSamplesHaveNoSecondOrderTerm) {
  const std::vector<double> w{0.4, -1.0};
  const Network phi = diffcore::MakeNetwork(std::vector<std::size_t>{3, 4, 2},
                                            Activation::kTanh, 71);
  const Tensor xs = Tensor::FromRows({{0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}});
  const TaylorReport r = AugmentationTaylorVerify(w, phi, xs, std::vector<int>{1, 1, 1});
  EXPECT_EQ(r.r_aug, r.g1);
  EXPECT_EQ(r.g2, 0.0);
  EXPECT_TRUE(r.holds_pair);
}

TEST(TaylorTest, SmallCloudRemainderAndShrinkage) {
  const std::vector<double> w{0.7, -0.4, 1.1};
  const Tensor a = Tensor::FromRows({{1.0, 0.5}, {-0.3, 2.0}, {0.2, 0.2}});
  CounterRng rng(72);
  std::normal_distribution<double> normal(0.0, 0.3);
  Tensor xs(200, 2);
  std::vector<int> ys(200);
  for (std::size_t i = 0; i < 200; ++i) {
    ys[i] = i % 2 ? 1 : -1;
    xs(i, 0) = ys[i] * 0.5 + normal(rng);
    xs(i, 1) = -0.2 + normal(rng);
  }
  const TaylorScaling s = TaylorRemainderScaling(w, Linear(a), xs, ys, 0.1);
  EXPECT_LT(s.narrow.remainder, 1e-3 * s.narrow.r_aug);
  // Remainder is at least cubic in the spread.
  EXPECT_LT(s.remainder_ratio, 0.02);
  EXPECT_TRUE(s.wide.holds_pair);
  EXPECT_TRUE(s.narrow.holds_pair);
}

TEST(TaylorTest, PairHoldsForRandomNetworks) {
  CounterRng rng(73);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Network phi = diffcore::MakeNetwork(std::vector<std::size_t>{3, 5, 2},
                                              Activation::kTanh, rng());
    const std::vector<double> w{normal(rng), normal(rng)};
    Tensor xs(40, 3);
    std::vector<int> ys(40);
    for (double& v : xs.data()) v = normal(rng);
    for (int& y : ys) y = rng.Uniform() < 0.5 ? -1 : 1;
    const TaylorReport r = AugmentationTaylorVerify(w, phi, xs, ys);
    EXPECT_TRUE(r.holds_pair);
    EXPECT_LE(r.max_second_deriv, 0.25);
  }
}

TEST(TaylorTest, LogisticSecondDerivativeBound) {
  for (int i = -1000; i <= 1000; ++i) {
    const double yhat = i / 100.0;
    const double e = std::exp(yhat);
    EXPECT_NEAR(LogisticSecondDeriv(yhat), e / ((1 + e) * (1 + e)), 1e-15);
    EXPECT_LE(LogisticSecondDeriv(yhat), 0.25);
  }
  EXPECT_EQ(LogisticSecondDeriv(0.0), 0.25);
}

TEST(TaylorTest, RejectsNonBinaryLabels) {
  const std::vector<double> w{1.0};
  const Tensor xs = Tensor::FromRows({{0.0}, {1.0}});
  EXPECT_THROW(AugmentationTaylorVerify(w, Linear(Tensor::Identity(1)), xs,
                                        std::vector<int>{0, 1}),
               std::invalid_argument);
  EXPECT_THROW(ShrinkCloud(xs, std::vector<int>{1, 1}, 1.5), std::invalid_argument);
}

// --------------------------------------------------------------------------

TEST(SuiteSummaryTest, WritesParseableJson) {
  std::ostringstream csv, out;
  const SuiteSummary s = RunSdpiSuite(5, 81, &csv);
  WriteSuiteSummaries(out, {s});
  const auto doc = nlohmann::json::parse(out.str());
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["suite"], "sdpi");
  EXPECT_EQ(doc[0]["instances"], 5);
  EXPECT_EQ(doc[0]["violations"], 0);
  std::size_t lines = 0;
  for (char c : csv.str()) lines += c == '\n';
  EXPECT_EQ(lines, 6u);
  std::ostringstream again;
  RunSdpiSuite(5, 81, &again);
  EXPECT_EQ(csv.str(), again.str());
}

}  // namespace
}  // namespace invgen::theory
