// invgen/trainer/optimizer.hpp

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

#ifndef INVGEN_TRAINER_OPTIMIZER_HPP_
#define INVGEN_TRAINER_OPTIMIZER_HPP_

#include <string_view>

#include "invgen/diffcore/network.hpp"

namespace invgen::trainer {

using diffcore::Gradients;
using diffcore::Network;
using diffcore::Tensor;

enum class OptimizerKind { kSgd, kAdam };

std::string_view OptimizerName(OptimizerKind kind);
OptimizerKind ParseOptimizer(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  /// lr may be 0 (a frozen model, used for degenerate grid points); the
  /// betas must lie in [0, 1) and eps must be positive.
  void Validate() const;
};

/// Per-network optimizer state. Descends the given gradient.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, const Network& net);

  /// SGD: theta -= lr g. Adam: bias-corrected moment update. Throws
  /// std::invalid_argument on shape mismatch and std::domain_error on a
  /// non-finite gradient; the network is untouched in both cases.
  void Step(Network& net, const Gradients& grads);

  long long steps() const { return t_; }

 private:
  OptimizerConfig cfg_;
  Gradients m_;
  Gradients v_;
  long long t_ = 0;
};

}  // namespace invgen::trainer

#endif  // INVGEN_TRAINER_OPTIMIZER_HPP_
