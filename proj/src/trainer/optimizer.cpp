// invgen/trainer/optimizer.cpp

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

#include "invgen/trainer/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace invgen::trainer {

std::string_view OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind ParseOptimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) +
                              "' (expected sgd or adam)");
}

void OptimizerConfig::Validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw std::invalid_argument("optimizer: lr must be finite and >= 0");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("optimizer: betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("optimizer: eps must be > 0");
}

Optimizer::Optimizer(const OptimizerConfig& cfg, const Network& net)
    : cfg_(cfg),
      m_(Gradients::ZerosLike(net)),
      v_(Gradients::ZerosLike(net)) {
  cfg_.Validate();
}

void Optimizer::Step(Network& net, const Gradients& grads) {
  if (!grads.CongruentWith(net) || !m_.CongruentWith(net)) {
    throw std::invalid_argument("Optimizer::Step: gradient shape mismatch");
  }
  if (!grads.AllFinite()) {
    throw std::domain_error("Optimizer::Step: non-finite gradient");
  }
  ++t_;
  const double lr = cfg_.lr;
  if (cfg_.kind == OptimizerKind::kSgd) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      diffcore::Layer& layer = net.mutable_layer(l);
      const auto& g = grads.layer(l);
      auto w = layer.weight.data();
      auto gw = g.dw.data();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= lr * gw[i];
      auto b = layer.bias.data();
      auto gb = g.db.data();
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * gb[i];
    }
    return;
  }
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  auto update = [&](diffcore::Tensor& param, const diffcore::Tensor& g,
                    diffcore::Tensor& m, diffcore::Tensor& v) {
    auto p = param.data();
    auto gs = g.data();
    auto ms = m.data();
    auto vs = v.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      ms[i] = b1 * ms[i] + (1.0 - b1) * gs[i];
      vs[i] = b2 * vs[i] + (1.0 - b2) * gs[i] * gs[i];
      const double mhat = ms[i] / c1;
      const double vhat = vs[i] / c2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  };
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    diffcore::Layer& layer = net.mutable_layer(l);
    update(layer.weight, grads.layer(l).dw, m_.layer(l).dw, v_.layer(l).dw);
    update(layer.bias, grads.layer(l).db, m_.layer(l).db, v_.layer(l).db);
  }
}

}  // namespace invgen::trainer
