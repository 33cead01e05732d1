// invgen/diffcore/gradcheck.cpp

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

#include "invgen/diffcore/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invgen::diffcore {

double FiniteDiffCheck(const LossFn& loss_fn, const Network& net, double step) {
  if (!(step >= 1e-7 && step <= 1e-3)) {
    throw std::invalid_argument("FiniteDiffCheck: step must be in [1e-7, 1e-3]");
  }
  auto [loss, grads] = loss_fn(net);
  if (!std::isfinite(loss)) {
    throw std::domain_error("FiniteDiffCheck: non-finite loss at base point");
  }
  if (!grads.CongruentWith(net)) {
    throw std::invalid_argument(
        "FiniteDiffCheck: analytic gradient shape does not match network");
  }
  const std::vector<double> analytic = grads.Flatten();

  Network probe = net;
  std::vector<double*> params;
  ForEachParameter(probe, [&](double& v) { params.push_back(&v); });

  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = *params[k];
    // Touch the revision so tapes cached by the loss cannot be reused.
    *params[k] = saved + step;
    probe.mutable_layer(0);
    const double up = loss_fn(probe).first;
    *params[k] = saved - step;
    probe.mutable_layer(0);
    const double down = loss_fn(probe).first;
    *params[k] = saved;
    probe.mutable_layer(0);
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw std::domain_error("FiniteDiffCheck: non-finite loss");
    }
    const double fd = (up - down) / (2.0 * step);
    worst = std::max(worst,
                     std::abs(analytic[k] - fd) / std::max(1.0, std::abs(fd)));
  }
  return worst;
}

}  // namespace invgen::diffcore
