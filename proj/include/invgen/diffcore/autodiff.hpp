// invgen/diffcore/autodiff.hpp

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

#ifndef INVGEN_DIFFCORE_AUTODIFF_HPP_
#define INVGEN_DIFFCORE_AUTODIFF_HPP_

#include <cstdint>
#include <vector>

#include "invgen/diffcore/network.hpp"
#include "invgen/diffcore/tensor.hpp"

namespace invgen::diffcore {

/// Activation record of one forward pass over a batch (rows are samples).
struct Tape {
  std::uint64_t revision = 0;
  std::vector<Tensor> inputs;  // inputs[l]: input to layer l, n x in_l
  std::vector<Tensor> pre;     // pre[l]: pre-activation of layer l, n x out_l
};

struct ForwardResult {
  Tensor output;  // n x out_dim
  Tape tape;
};

struct BackwardResult {
  Gradients grads;  // summed over batch rows
  Tensor dx;        // n x in_dim
};

/// Runs the network on each row of `xs`.
ForwardResult Forward(const Network& net, const Tensor& xs);

/// Output only, no tape.
Tensor Predict(const Network& net, const Tensor& xs);

/// Reverse pass for the scalar sum_i <upstream_i, output_i>. The tape must
/// come from Forward on the same network revision.
BackwardResult Backward(const Network& net, const Tape& tape,
                        const Tensor& upstream);

/// Exact input Jacobian (out_dim x in_dim) at a single 1 x in_dim point.
Tensor Jacobian(const Network& net, const Tensor& x);

double JacobianFrobeniusSq(const Network& net, const Tensor& x);

/// Gradient of JacobianFrobeniusSq w.r.t. every parameter at point x.
Gradients GradJacobianPenalty(const Network& net, const Tensor& x);

/// Adds scale * d||J(x)||_F^2 / d(params) into `accum` and returns
/// ||J(x)||_F^2. Used by the batch regularizer to avoid temporaries.
double AccumulateJacobianPenalty(const Network& net, const Tensor& x,
                                 double scale, Gradients* accum);

}  // namespace invgen::diffcore

#endif  // INVGEN_DIFFCORE_AUTODIFF_HPP_
