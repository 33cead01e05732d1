// invgen/tests/unit/diffcore_test.cpp

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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "invgen/common/error.hpp"
#include "invgen/common/rng.hpp"
#include "invgen/diffcore/autodiff.hpp"
#include "invgen/diffcore/checkpoint.hpp"
#include "invgen/diffcore/gradcheck.hpp"
#include "invgen/diffcore/network.hpp"

namespace invgen::diffcore {
namespace {

Network Linear(const Tensor& w) {
  return Network({Layer{w, Tensor(w.rows(), 1), Activation::kIdentity}});
}

Tensor RandomRow(std::size_t n, CounterRng& rng, double scale = 1.0) {
  Tensor x(1, n);
  for (double& v : x.data()) v = scale * (2.0 * rng.Uniform() - 1.0);
  return x;
}

Network RandomNet(std::vector<std::size_t> dims, std::uint64_t seed,
                  Activation act = Activation::kTanh) {
  Network net = MakeNetwork(dims, act, Activation::kIdentity, seed);
  // Nonzero biases so every code path sees them.
  CounterRng rng(seed + 1000);
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    for (double& b : net.mutable_layer(l).bias.data()) {
      b = 0.3 * (2.0 * rng.Uniform() - 1.0);
    }
  }
  return net;
}

// Straight-line evaluation kept separate from Forward.
std::vector<double> Reference(const Network& net, std::vector<double> a) {
  for (const Layer& layer : net.layers()) {
    std::vector<double> next(layer.out_dim());
    for (std::size_t i = 0; i < layer.out_dim(); ++i) {
      double s = layer.bias(i, 0);
      for (std::size_t j = 0; j < layer.in_dim(); ++j) s += layer.weight(i, j) * a[j];
      switch (layer.activation) {
        case Activation::kTanh: next[i] = std::tanh(s); break;
        case Activation::kSoftplus: next[i] = std::log(1.0 + std::exp(s)); break;
        case Activation::kIdentity: next[i] = s; break;
      }
    }
    a = next;
  }
  return a;
}

TEST(NetworkTest, ShapesAndDeterminism) {
  std::vector<std::size_t> dims{2, 3, 2};
  Network a = MakeNetwork(dims, Activation::kTanh, 7);
  EXPECT_EQ(a.num_layers(), 2u);
  EXPECT_EQ(a.in_dim(), 2u);
  EXPECT_EQ(a.out_dim(), 2u);
  Network b = MakeNetwork(dims, Activation::kTanh, 7);
  for (std::size_t l = 0; l < 2; ++l) {
    EXPECT_EQ(a.layer(l).weight, b.layer(l).weight);
    EXPECT_EQ(a.layer(l).bias, b.layer(l).bias);
  }
  const double bound = std::sqrt(6.0 / 5.0);
  for (double w : a.layer(0).weight.data()) EXPECT_LE(std::abs(w), bound);
}

TEST(NetworkTest, RejectsSingleDim) {
  std::vector<std::size_t> dims{4};
  EXPECT_THROW(MakeNetwork(dims, Activation::kTanh, 1), std::invalid_argument);
  std::vector<std::size_t> none;
  EXPECT_THROW(MakeNetwork(none, Activation::kTanh, 1), std::invalid_argument);
}

TEST(NetworkTest, RejectsBrokenChain) {
  std::vector<Layer> layers{
      Layer{Tensor(3, 2), Tensor(3, 1), Activation::kTanh},
      Layer{Tensor(2, 4), Tensor(2, 1), Activation::kTanh}};
  EXPECT_THROW(Network(std::move(layers)), std::invalid_argument);
}

TEST(ForwardTest, IdentityLayer) {
  Network net = Linear(Tensor::Identity(2));
  Tensor out = Forward(net, Tensor::Row({1, 2})).output;
  EXPECT_EQ(out(0, 0), 1.0);
  EXPECT_EQ(out(0, 1), 2.0);
}

TEST(ForwardTest, TanhAtZero) {
  Network net({Layer{Tensor::FromRows({{0.7, -1.2}}), Tensor(1, 1),
                     Activation::kTanh}});
  EXPECT_EQ(Forward(net, Tensor::Row({0, 0})).output(0, 0), 0.0);
}

TEST(ForwardTest, DimMismatch) {
  Network net = Linear(Tensor::Identity(2));
  EXPECT_THROW(Forward(net, Tensor::Row({1, 2, 3})), std::invalid_argument);
}

TEST(ForwardTest, MatchesReferenceEvaluation) {
  CounterRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Activation act = trial % 2 ? Activation::kSoftplus : Activation::kTanh;
    Network net = RandomNet({5, 7, 4, 3}, 100 + trial, act);
    Tensor x = RandomRow(5, rng, 2.0);
    auto ref = Reference(net, {x.data().begin(), x.data().end()});
    Tensor out = Forward(net, x).output;
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(out(0, k), ref[k], 1e-12);
  }
}

TEST(BackwardTest, LinearUnitUpstream) {
  Network net = Linear(Tensor::FromRows({{1, 2, 3}, {4, 5, 6}}));
  Tensor x = Tensor::Row({0.5, -1.0, 2.0});
  auto fwd = Forward(net, x);
  auto res = Backward(net, fwd.tape, Tensor::Row({1, 0}));
  const Tensor& dw = res.grads.layer(0).dw;
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_EQ(dw(0, j), x(0, j));
    EXPECT_EQ(dw(1, j), 0.0);
  }
  EXPECT_EQ(res.dx(0, 0), 1.0);
  EXPECT_EQ(res.dx(0, 2), 3.0);
}

TEST(BackwardTest, StaleTapeRejected) {
  Network net = RandomNet({3, 4, 2}, 3);
  auto fwd = Forward(net, Tensor::Row({0.1, 0.2, 0.3}));
  net.mutable_layer(0).bias(0, 0) += 1.0;
  EXPECT_THROW(Backward(net, fwd.tape, Tensor::Row({1, 0})),
               std::invalid_argument);
  Network other = RandomNet({3, 4, 2}, 3);
  EXPECT_THROW(Backward(other, fwd.tape, Tensor::Row({1, 0})),
               std::invalid_argument);
}

TEST(BackwardTest, DxEqualsJacobianRows) {
  CounterRng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Network net = RandomNet({4, 6, 3}, 200 + trial,
                            trial % 3 == 0 ? Activation::kSoftplus
                                           : Activation::kTanh);
    Tensor x = RandomRow(4, rng, 1.5);
    Tensor j = Jacobian(net, x);
    auto fwd = Forward(net, x);
    for (std::size_t k = 0; k < 3; ++k) {
      Tensor e(1, 3);
      e(0, k) = 1.0;
      Tensor dx = Backward(net, fwd.tape, e).dx;
      for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(dx(0, c), j(k, c), 1e-12);
    }
  }
}

TEST(BackwardTest, RandomScalarLossMatchesFiniteDifferences) {
  CounterRng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Network net = RandomNet({3, 5, 2}, 300 + trial);
    Tensor xs(4, 3);
    for (double& v : xs.data()) v = 2.0 * rng.Uniform() - 1.0;
    Tensor c(4, 2);
    for (double& v : c.data()) v = 2.0 * rng.Uniform() - 1.0;
    LossFn loss = [&](const Network& n) {
      auto fwd = Forward(n, xs);
      double s = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) s += c.data()[i] * fwd.output.data()[i];
      return std::make_pair(s, Backward(n, fwd.tape, c).grads);
    };
    EXPECT_LT(FiniteDiffCheck(loss, net, 1e-5), 1e-5);
  }
}

TEST(JacobianTest, LinearMapIsExact) {
  Tensor a = Tensor::FromRows({{1, 2}, {3, 4}});
  Network net = Linear(a);
  EXPECT_EQ(Jacobian(net, Tensor::Row({0.3, -7})), a);
  EXPECT_EQ(JacobianFrobeniusSq(net, Tensor::Row({5, 5})), 30.0);
}

TEST(JacobianTest, TanhAtOriginIsWeightProduct) {
  Network net = MakeNetwork(std::vector<std::size_t>{3, 4, 2},
                            Activation::kTanh, 17);
  Tensor j = Jacobian(net, Tensor(1, 3));
  Tensor prod = MatMul(net.layer(1).weight, net.layer(0).weight);
  for (std::size_t i = 0; i < j.size(); ++i) {
    EXPECT_NEAR(j.data()[i], prod.data()[i], 1e-15);
  }
}

TEST(JacobianTest, ZeroNetworkHasZeroNorm) {
  Network net({Layer{Tensor(3, 2), Tensor(3, 1), Activation::kTanh},
               Layer{Tensor(2, 3), Tensor(2, 1), Activation::kIdentity}});
  EXPECT_EQ(JacobianFrobeniusSq(net, Tensor::Row({1, -1})), 0.0);
  Gradients g = GradJacobianPenalty(net, Tensor::Row({1, -1}));
  EXPECT_EQ(g.MaxAbs(), 0.0);
}

TEST(JacobianTest, ColumnsMatchFiniteDifferences) {
  CounterRng rng(21);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    Network net = RandomNet({4, 8, 3}, 400 + trial);
    Tensor x = RandomRow(4, rng);
    Tensor j = Jacobian(net, x);
    double sq = 0.0;
    for (double v : j.data()) sq += v * v;
    EXPECT_DOUBLE_EQ(JacobianFrobeniusSq(net, x), sq);
    for (std::size_t c = 0; c < 4; ++c) {
      Tensor up = x, down = x;
      up(0, c) += h;
      down(0, c) -= h;
      Tensor fu = Predict(net, up), fd = Predict(net, down);
      for (std::size_t r = 0; r < 3; ++r) {
        const double num = (fu(0, r) - fd(0, r)) / (2 * h);
        EXPECT_LT(std::abs(num - j(r, c)) / std::max(1.0, std::abs(num)), 1e-6);
      }
    }
  }
}

TEST(JacobianPenaltyTest, LinearGradientIsTwiceWeight) {
  Tensor w = Tensor::FromRows({{1, -2, 0.5}, {3, 4, -1}});
  Network net = Linear(w);
  Gradients g = GradJacobianPenalty(net, Tensor::Row({1, 2, 3}));
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_EQ(g.layer(0).dw.data()[i], 2.0 * w.data()[i]);
  }
  EXPECT_EQ(g.layer(0).db.SquaredNorm(), 0.0);
}

TEST(JacobianPenaltyTest, MatchesFiniteDifferences) {
  CounterRng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Activation act = trial % 2 ? Activation::kSoftplus : Activation::kTanh;
    Network net = MakeNetwork(std::vector<std::size_t>{4, 6, 3}, act, act,
                              500 + trial);
    Tensor x = RandomRow(4, rng, 1.5);
    LossFn loss = [&](const Network& n) {
      return std::make_pair(JacobianFrobeniusSq(n, x), GradJacobianPenalty(n, x));
    };
    EXPECT_LT(FiniteDiffCheck(loss, net, 1e-5), 1e-4);
  }
}

TEST(JacobianPenaltyTest, DeepNetworkMatchesFiniteDifferences) {
  CounterRng rng(34);
  Network net = RandomNet({5, 6, 4, 3}, 77);
  Tensor x = RandomRow(5, rng);
  LossFn loss = [&](const Network& n) {
    return std::make_pair(JacobianFrobeniusSq(n, x), GradJacobianPenalty(n, x));
  };
  EXPECT_LT(FiniteDiffCheck(loss, net, 1e-5), 1e-4);
}

TEST(GradCheckTest, QuadraticIsNearlyExact) {
  Tensor x = Tensor::Row({0.3, -1.1, 2.0});
  Network net = Linear(Tensor::FromRows({{0.2, 0.1, -0.4}, {1.0, 0.5, 0.3}}));
  LossFn loss = [&](const Network& n) {
    auto fwd = Forward(n, x);
    return std::make_pair(0.5 * fwd.output.SquaredNorm(),
                          Backward(n, fwd.tape, fwd.output).grads);
  };
  EXPECT_LT(FiniteDiffCheck(loss, net, 1e-4), 1e-8);
}

TEST(GradCheckTest, RejectsBadStepAndNonFiniteLoss) {
  Network net = Linear(Tensor::Identity(2));
  LossFn loss = [](const Network& n) {
    return std::make_pair(0.0, Gradients::ZerosLike(n));
  };
  EXPECT_THROW(FiniteDiffCheck(loss, net, 1e-2), std::invalid_argument);
  LossFn bad = [](const Network& n) {
    return std::make_pair(std::nan(""), Gradients::ZerosLike(n));
  };
  EXPECT_THROW(FiniteDiffCheck(bad, net, 1e-5), std::domain_error);
}

TEST(CheckpointTest, RoundTripIsExact) {
  Network net = RandomNet({3, 5, 2}, 8, Activation::kSoftplus);
  std::stringstream ss;
  WriteNetwork(ss, net);
  Network back = ReadNetwork(ss);
  ASSERT_EQ(back.num_layers(), net.num_layers());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    EXPECT_EQ(back.layer(l).weight, net.layer(l).weight);
    EXPECT_EQ(back.layer(l).bias, net.layer(l).bias);
    EXPECT_EQ(back.layer(l).activation, net.layer(l).activation);
  }
}

TEST(CheckpointTest, RejectsCorruption) {
  Network net = RandomNet({2, 2}, 1);
  std::stringstream ss;
  WriteNetwork(ss, net);
  std::string bytes = ss.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream a(bad_magic);
  EXPECT_THROW(ReadNetwork(a), DataError);

  std::istringstream b(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(ReadNetwork(b), DataError);

  std::string bad_tag = bytes;
  bad_tag[8 + 4 + 4 + 4 + 4] = 9;
  std::istringstream c(bad_tag);
  EXPECT_THROW(ReadNetwork(c), DataError);
}

}  // namespace
}  // namespace invgen::diffcore
