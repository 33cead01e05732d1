// invgen/diffcore/network.hpp

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

#ifndef INVGEN_DIFFCORE_NETWORK_HPP_
#define INVGEN_DIFFCORE_NETWORK_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "invgen/diffcore/tensor.hpp"

namespace invgen::diffcore {

/// Only everywhere-twice-differentiable activations are supported; the
/// Jacobian penalty gradient needs the second derivative.
enum class Activation : std::uint8_t {
  kTanh = 0,
  kSoftplus = 1,
  kIdentity = 2,
};

bool IsSmooth(Activation act);
std::string_view ActivationName(Activation act);
Activation ParseActivation(std::string_view name);

double Activate(Activation act, double x);
double ActivateDeriv(Activation act, double x);
double ActivateSecondDeriv(Activation act, double x);

struct Layer {
  Tensor weight;  // out x in
  Tensor bias;    // out x 1
  Activation activation = Activation::kIdentity;

  std::size_t in_dim() const { return weight.cols(); }
  std::size_t out_dim() const { return weight.rows(); }
};

/// Layered dense model. Value type; every mutation through mutable_layer()
/// assigns a fresh revision so tapes recorded earlier are rejected.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<Layer> layers);

  std::size_t in_dim() const;
  std::size_t out_dim() const;
  std::size_t num_layers() const { return layers_.size(); }
  std::size_t parameter_count() const;
  bool empty() const { return layers_.empty(); }

  const Layer& layer(std::size_t i) const { return layers_.at(i); }
  std::span<const Layer> layers() const { return layers_; }
  Layer& mutable_layer(std::size_t i);

  std::uint64_t revision() const { return revision_; }

 private:
  std::vector<Layer> layers_;
  std::uint64_t revision_ = 0;
};

/// Builds a network over `dims` (at least two entries). Hidden layers use
/// `hidden`, the last layer uses `output`. Weights are drawn uniformly from
/// +-sqrt(6 / (in + out)) with a CounterRng keyed by `seed`; biases are 0.
Network MakeNetwork(std::span<const std::size_t> dims, Activation hidden,
                    Activation output, std::uint64_t seed);
Network MakeNetwork(std::span<const std::size_t> dims, Activation activation,
                    std::uint64_t seed);

/// Per-layer parameter gradients, shape-congruent with a Network.
struct LayerGradient {
  Tensor dw;
  Tensor db;
};

class Gradients {
 public:
  Gradients() = default;
  static Gradients ZerosLike(const Network& net);

  std::size_t num_layers() const { return layers_.size(); }
  LayerGradient& layer(std::size_t i) { return layers_.at(i); }
  const LayerGradient& layer(std::size_t i) const { return layers_.at(i); }

  /// this += scale * other.
  void AddScaled(const Gradients& other, double scale);
  void Scale(double factor);
  bool AllFinite() const;
  bool CongruentWith(const Network& net) const;
  double MaxAbs() const;
  double SquaredNorm() const;

  /// Flattened view in layer order, weights before biases.
  std::vector<double> Flatten() const;

 private:
  std::vector<LayerGradient> layers_;
};

/// Visits every scalar parameter in the same order as Gradients::Flatten.
template <typename Fn>
void ForEachParameter(Network& net, Fn&& fn) {
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    Layer& layer = net.mutable_layer(l);
    for (double& w : layer.weight.data()) fn(w);
    for (double& b : layer.bias.data()) fn(b);
  }
}

}  // namespace invgen::diffcore

#endif  // INVGEN_DIFFCORE_NETWORK_HPP_
