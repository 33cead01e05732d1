// invgen/experiments/selftest.cpp

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

#include "invgen/experiments/selftest.hpp"

#include <algorithm>
#include <functional>

#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"
#include "invgen/diffcore/autodiff.hpp"
#include "invgen/diffcore/gradcheck.hpp"
#include "invgen/invariance/losses.hpp"

namespace invgen::experiments {

using diffcore::Activation;
using diffcore::FiniteDiffCheck;
using diffcore::Gradients;
using diffcore::Network;
using diffcore::Tensor;

namespace {

constexpr double kFirstOrder = 1e-5;
constexpr double kSecondOrder = 1e-4;

std::size_t Between(CounterRng& rng, std::size_t lo, std::size_t hi) {
  return lo + rng.Index(hi - lo + 1);
}

Activation SmoothActivation(CounterRng& rng) {
  return rng.Index(2) == 0 ? Activation::kTanh : Activation::kSoftplus;
}

Network RandomNet(CounterRng& rng, std::size_t in, std::size_t out, bool linear_output) {
  std::vector<std::size_t> dims{in};
  const std::size_t hidden_layers = Between(rng, 1, 2);
  for (std::size_t l = 0; l < hidden_layers; ++l) dims.push_back(Between(rng, 2, 6));
  dims.push_back(out);
  const Activation act = SmoothActivation(rng);
  return diffcore::MakeNetwork(dims, act, linear_output ? Activation::kIdentity : act, rng());
}

Tensor RandomInputs(CounterRng& rng, std::size_t n, std::size_t d) {
  Tensor x(n, d);
  for (double& v : x.data()) v = 2.0 * rng.Uniform() - 1.0;
  return x;
}

// Two rows per (env, class) cell, labels and envs interleaved.
invariance::Batch RandomBatch(CounterRng& rng, std::size_t d, int k, int t) {
  invariance::Batch b;
  const std::size_t n = 2 * static_cast<std::size_t>(k * t);
  b.xs = RandomInputs(rng, n, d);
  for (std::size_t i = 0; i < n; ++i) {
    b.ys.push_back(static_cast<int>(i % k));
    b.envs.push_back(static_cast<int>((i / k) % t));
  }
  return b;
}

struct Setup {
  Network phi;
  Network h;
  invariance::Batch batch;
  int k = 2;
  int t = 2;
  double lambda0 = 1.0;
};

Setup RandomSetup(CounterRng& rng) {
  Setup s;
  const std::size_t d = Between(rng, 1, 5);
  const std::size_t latent = Between(rng, 2, 4);
  s.k = static_cast<int>(Between(rng, 2, 3));
  s.t = static_cast<int>(Between(rng, 2, 3));
  s.phi = RandomNet(rng, d, latent, false);
  s.h = RandomNet(rng, latent, static_cast<std::size_t>(s.k), true);
  s.batch = RandomBatch(rng, d, s.k, s.t);
  s.lambda0 = 0.1 + 2.0 * rng.Uniform();
  return s;
}

using Family = std::function<double(CounterRng&, double step)>;

double CrossEntropyFamily(CounterRng& rng, double step) {
  const std::size_t d = Between(rng, 1, 5);
  const int k = static_cast<int>(Between(rng, 2, 4));
  const Network net = RandomNet(rng, d, static_cast<std::size_t>(k), true);
  const Tensor x = RandomInputs(rng, 1, d);
  const int y = static_cast<int>(rng.Index(static_cast<std::size_t>(k)));
  auto loss = [&](const Network& n) {
    auto fwd = diffcore::Forward(n, x);
    auto ce = invariance::CrossEntropy(fwd.output.row(0), y);
    Tensor up(1, ce.dlogits.size(), ce.dlogits);
    return std::make_pair(ce.loss, diffcore::Backward(n, fwd.tape, up).grads);
  };
  return FiniteDiffCheck(loss, net, step);
}

double BalancedRiskFamily(CounterRng& rng, double step) {
  const Setup s = RandomSetup(rng);
  auto wrt_h = [&](const Network& h) {
    auto r = invariance::BalancedRisk(h, s.phi, s.batch, s.k, s.t);
    return std::make_pair(r.value, r.h);
  };
  auto wrt_phi = [&](const Network& phi) {
    auto r = invariance::BalancedRisk(s.h, phi, s.batch, s.k, s.t);
    return std::make_pair(r.value, r.phi);
  };
  return std::max(FiniteDiffCheck(wrt_h, s.h, step), FiniteDiffCheck(wrt_phi, s.phi, step));
}

// phi must receive -lambda0 times the gradient of the domain loss and the
// discriminator +lambda0 times it.
double AdversarialFamily(CounterRng& rng, double step, bool conditional) {
  const Setup s = RandomSetup(rng);
  const std::size_t disc_in = s.phi.out_dim() + (conditional ? s.k : 0);
  const Network disc = RandomNet(rng, disc_in, static_cast<std::size_t>(s.t), true);
  auto eval = [&](const Network& phi, const Network& d) {
    return conditional ? invariance::CdannLoss(phi, d, s.batch, s.k, s.t, s.lambda0)
                       : invariance::DannLoss(phi, d, s.batch, s.t, s.lambda0);
  };
  auto wrt_phi = [&](const Network& phi) {
    auto r = eval(phi, disc);
    return std::make_pair(-s.lambda0 * r.inv_loss, r.phi);
  };
  auto wrt_disc = [&](const Network& d) {
    auto r = eval(s.phi, d);
    return std::make_pair(s.lambda0 * r.inv_loss, r.disc);
  };
  return std::max(FiniteDiffCheck(wrt_phi, s.phi, step), FiniteDiffCheck(wrt_disc, disc, step));
}

double IrmFamily(CounterRng& rng, double step) {
  const Setup s = RandomSetup(rng);
  auto wrt_h = [&](const Network& h) {
    auto r = invariance::IrmPenalty(h, s.phi, s.batch, s.t);
    return std::make_pair(r.value, r.h);
  };
  auto wrt_phi = [&](const Network& phi) {
    auto r = invariance::IrmPenalty(s.h, phi, s.batch, s.t);
    return std::make_pair(r.value, r.phi);
  };
  return std::max(FiniteDiffCheck(wrt_h, s.h, step), FiniteDiffCheck(wrt_phi, s.phi, step));
}

double JacobianFamily(CounterRng& rng, double step) {
  const std::size_t d = Between(rng, 1, 5);
  const Network net = RandomNet(rng, d, Between(rng, 1, 4), rng.Index(2) == 0);
  const Tensor x = RandomInputs(rng, 1, d);
  auto loss = [&](const Network& n) {
    return std::make_pair(diffcore::JacobianFrobeniusSq(n, x),
                          diffcore::GradJacobianPenalty(n, x));
  };
  return FiniteDiffCheck(loss, net, step);
}

}  // namespace

bool SelftestResult::Passed() const {
  return std::all_of(families.begin(), families.end(),
                     [](const SelftestFamily& f) { return f.passed; });
}

SelftestResult RunSelftest(std::uint64_t seed, std::size_t triples, double step) {
  const std::vector<std::tuple<std::string, Family, double>> families{
      {"cross_entropy", CrossEntropyFamily, kFirstOrder},
      {"balanced_risk", BalancedRiskFamily, kFirstOrder},
      {"dann_reversal", [](CounterRng& r, double h) { return AdversarialFamily(r, h, false); },
       kFirstOrder},
      {"cdann", [](CounterRng& r, double h) { return AdversarialFamily(r, h, true); },
       kFirstOrder},
      {"irm_penalty", IrmFamily, kSecondOrder},
      {"jacobian_penalty", JacobianFamily, kSecondOrder},
  };
  SelftestResult out;
  const CounterRng root(seed);
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& [name, fn, threshold] = families[f];
    SelftestFamily fam;
    fam.name = name;
    fam.threshold = threshold;
    for (std::size_t i = 0; i < triples; ++i) {
      CounterRng rng = root.Fork(f).Fork(i);
      fam.max_error = std::max(fam.max_error, fn(rng, step));
      ++fam.triples;
    }
    fam.passed = fam.max_error < threshold;
    out.families.push_back(fam);
  }
  return out;
}

void PrintSelftest(std::ostream& os, const SelftestResult& result) {
  CsvWriter csv(os);
  csv.Header({"family", "triples", "max_rel_error", "threshold", "result"});
  for (const auto& f : result.families) {
    csv.Field(f.name).Field(f.triples).Field(FormatNumber(f.max_error, 3))
        .Field(FormatNumber(f.threshold, 3)).Field(f.passed ? "pass" : "FAIL");
    csv.EndRow();
  }
}

}  // namespace invgen::experiments
