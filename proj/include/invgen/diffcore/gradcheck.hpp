// invgen/diffcore/gradcheck.hpp

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

#ifndef INVGEN_DIFFCORE_GRADCHECK_HPP_
#define INVGEN_DIFFCORE_GRADCHECK_HPP_

#include <functional>
#include <utility>

#include "invgen/diffcore/network.hpp"

namespace invgen::diffcore {

/// Loss evaluated at a (possibly perturbed) copy of the network, returning
/// the scalar and its analytic parameter gradient.
using LossFn = std::function<std::pair<double, Gradients>(const Network&)>;

/// Compares the analytic gradient at `net` with central differences of step
/// `step` in [1e-7, 1e-3] over every parameter. Returns
/// max |analytic - fd| / max(1, |fd|). Throws std::domain_error if any loss
/// evaluation is non-finite.
double FiniteDiffCheck(const LossFn& loss_fn, const Network& net, double step);

}  // namespace invgen::diffcore

#endif  // INVGEN_DIFFCORE_GRADCHECK_HPP_
