// invgen/diffcore/network.cpp

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

#include "invgen/diffcore/network.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "invgen/common/rng.hpp"

namespace invgen::diffcore {

namespace {

std::uint64_t NextRevision() {
  static std::atomic<std::uint64_t> counter{0};
  return ++counter;
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

bool IsSmooth(Activation act) {
  switch (act) {
    case Activation::kTanh:
    case Activation::kSoftplus:
    case Activation::kIdentity:
      return true;
  }
  return false;
}

std::string_view ActivationName(Activation act) {
  switch (act) {
    case Activation::kTanh:
      return "tanh";
    case Activation::kSoftplus:
      return "softplus";
    case Activation::kIdentity:
      return "identity";
  }
  return "invalid";
}

Activation ParseActivation(std::string_view name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "softplus") return Activation::kSoftplus;
  if (name == "identity") return Activation::kIdentity;
  throw std::invalid_argument("unknown activation '" + std::string(name) +
                              "' (expected tanh, softplus or identity)");
}

double Activate(Activation act, double x) {
  switch (act) {
    case Activation::kTanh:
      return std::tanh(x);
    case Activation::kSoftplus:
      // log(1 + e^x) without overflow.
      return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    case Activation::kIdentity:
      return x;
  }
  throw std::invalid_argument("Activate: invalid activation tag");
}

double ActivateDeriv(Activation act, double x) {
  switch (act) {
    case Activation::kTanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::kSoftplus:
      return Sigmoid(x);
    case Activation::kIdentity:
      return 1.0;
  }
  throw std::invalid_argument("ActivateDeriv: invalid activation tag");
}

double ActivateSecondDeriv(Activation act, double x) {
  switch (act) {
    case Activation::kTanh: {
      const double t = std::tanh(x);
      return -2.0 * t * (1.0 - t * t);
    }
    case Activation::kSoftplus: {
      const double s = Sigmoid(x);
      return s * (1.0 - s);
    }
    case Activation::kIdentity:
      return 0.0;
  }
  throw std::invalid_argument("ActivateSecondDeriv: invalid activation tag");
}

Network::Network(std::vector<Layer> layers)
    : layers_(std::move(layers)), revision_(NextRevision()) {
  if (layers_.empty()) throw std::invalid_argument("Network: no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const Layer& layer = layers_[l];
    if (layer.weight.empty()) {
      throw std::invalid_argument("Network: layer " + std::to_string(l) +
                                  " has an empty weight matrix");
    }
    if (layer.bias.rows() != layer.out_dim() || layer.bias.cols() != 1) {
      throw std::invalid_argument("Network: layer " + std::to_string(l) +
                                  " bias shape " + layer.bias.ShapeString() +
                                  " does not match weight " +
                                  layer.weight.ShapeString());
    }
    if (l > 0 && layers_[l - 1].out_dim() != layer.in_dim()) {
      throw std::invalid_argument("Network: layer " + std::to_string(l) +
                                  " input dim does not chain");
    }
    if (!IsSmooth(layer.activation)) {
      throw std::invalid_argument("Network: layer " + std::to_string(l) +
                                  " has an unsupported activation");
    }
  }
}

std::size_t Network::in_dim() const {
  return layers_.empty() ? 0 : layers_.front().in_dim();
}

std::size_t Network::out_dim() const {
  return layers_.empty() ? 0 : layers_.back().out_dim();
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

Layer& Network::mutable_layer(std::size_t i) {
  revision_ = NextRevision();
  return layers_.at(i);
}

Network MakeNetwork(std::span<const std::size_t> dims, Activation hidden,
                    Activation output, std::uint64_t seed) {
  if (dims.size() < 2) {
    throw std::invalid_argument(
        "MakeNetwork: need at least two dims (input and output)");
  }
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("MakeNetwork: zero dimension");
  }
  CounterRng rng(seed);
  std::vector<Layer> layers;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const std::size_t in = dims[l];
    const std::size_t out = dims[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    Layer layer{Tensor(out, in), Tensor(out, 1),
                l + 2 == dims.size() ? output : hidden};
    for (double& w : layer.weight.data()) {
      w = (2.0 * rng.Uniform() - 1.0) * bound;
    }
    layers.push_back(std::move(layer));
  }
  return Network(std::move(layers));
}

Network MakeNetwork(std::span<const std::size_t> dims, Activation activation,
                    std::uint64_t seed) {
  return MakeNetwork(dims, activation, activation, seed);
}

Gradients Gradients::ZerosLike(const Network& net) {
  Gradients g;
  g.layers_.reserve(net.num_layers());
  for (const Layer& l : net.layers()) {
    g.layers_.push_back({Tensor(l.weight.rows(), l.weight.cols()),
                         Tensor(l.bias.rows(), 1)});
  }
  return g;
}

void Gradients::AddScaled(const Gradients& other, double scale) {
  if (other.layers_.size() != layers_.size()) {
    throw std::invalid_argument("Gradients::AddScaled: layer count mismatch");
  }
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    auto add = [scale](Tensor& dst, const Tensor& src) {
      if (!dst.SameShape(src)) {
        throw std::invalid_argument("Gradients::AddScaled: shape mismatch");
      }
      auto d = dst.data();
      auto s = src.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += scale * s[i];
    };
    add(layers_[l].dw, other.layers_[l].dw);
    add(layers_[l].db, other.layers_[l].db);
  }
}

void Gradients::Scale(double factor) {
  for (auto& l : layers_) {
    for (double& v : l.dw.data()) v *= factor;
    for (double& v : l.db.data()) v *= factor;
  }
}

bool Gradients::AllFinite() const {
  for (const auto& l : layers_) {
    if (!l.dw.AllFinite() || !l.db.AllFinite()) return false;
  }
  return true;
}

bool Gradients::CongruentWith(const Network& net) const {
  if (layers_.size() != net.num_layers()) return false;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (!layers_[l].dw.SameShape(net.layer(l).weight) ||
        !layers_[l].db.SameShape(net.layer(l).bias)) {
      return false;
    }
  }
  return true;
}

double Gradients::MaxAbs() const {
  double m = 0.0;
  for (const auto& l : layers_) {
    for (double v : l.dw.data()) m = std::max(m, std::abs(v));
    for (double v : l.db.data()) m = std::max(m, std::abs(v));
  }
  return m;
}

double Gradients::SquaredNorm() const {
  double s = 0.0;
  for (const auto& l : layers_) s += l.dw.SquaredNorm() + l.db.SquaredNorm();
  return s;
}

std::vector<double> Gradients::Flatten() const {
  std::vector<double> out;
  for (const auto& l : layers_) {
    out.insert(out.end(), l.dw.data().begin(), l.dw.data().end());
    out.insert(out.end(), l.db.data().begin(), l.db.data().end());
  }
  return out;
}

}  // namespace invgen::diffcore
