// invgen/diffcore/autodiff.cpp

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

#include "invgen/diffcore/autodiff.hpp"

#include <stdexcept>
#include <string>

namespace invgen::diffcore {

namespace {

void CheckInput(const Network& net, const Tensor& xs, const char* what) {
  if (net.empty()) throw std::invalid_argument(std::string(what) + ": empty network");
  if (xs.cols() != net.in_dim()) {
    throw std::invalid_argument(std::string(what) + ": input has " +
                                std::to_string(xs.cols()) +
                                " features, network expects " +
                                std::to_string(net.in_dim()));
  }
}

void CheckPoint(const Network& net, const Tensor& x, const char* what) {
  CheckInput(net, x, what);
  if (x.rows() != 1) {
    throw std::invalid_argument(std::string(what) +
                                ": expected a single 1 x in_dim point");
  }
}

// pre = xs * W^T + b (row broadcast).
Tensor Affine(const Layer& layer, const Tensor& xs) {
  Tensor pre = MatMulTransB(xs, layer.weight);
  const auto b = layer.bias.data();
  for (std::size_t r = 0; r < pre.rows(); ++r) {
    auto row = pre.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += b[c];
  }
  return pre;
}

Tensor Apply(Activation act, const Tensor& pre) {
  Tensor out(pre.rows(), pre.cols());
  auto src = pre.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = Activate(act, src[i]);
  return out;
}

}  // namespace

ForwardResult Forward(const Network& net, const Tensor& xs) {
  CheckInput(net, xs, "Forward");
  ForwardResult res;
  res.tape.revision = net.revision();
  res.tape.inputs.reserve(net.num_layers());
  res.tape.pre.reserve(net.num_layers());
  Tensor a = xs;
  for (const Layer& layer : net.layers()) {
    Tensor pre = Affine(layer, a);
    Tensor next = Apply(layer.activation, pre);
    res.tape.inputs.push_back(std::move(a));
    res.tape.pre.push_back(std::move(pre));
    a = std::move(next);
  }
  res.output = std::move(a);
  return res;
}

Tensor Predict(const Network& net, const Tensor& xs) {
  CheckInput(net, xs, "Predict");
  Tensor a = xs;
  for (const Layer& layer : net.layers()) a = Apply(layer.activation, Affine(layer, a));
  return a;
}

BackwardResult Backward(const Network& net, const Tape& tape,
                        const Tensor& upstream) {
  if (tape.revision != net.revision() ||
      tape.inputs.size() != net.num_layers()) {
    throw std::invalid_argument(
        "Backward: tape does not belong to this network revision");
  }
  const std::size_t n = tape.inputs.front().rows();
  if (upstream.rows() != n || upstream.cols() != net.out_dim()) {
    throw std::invalid_argument("Backward: upstream shape " +
                                upstream.ShapeString() +
                                " does not match output");
  }
  BackwardResult res;
  res.grads = Gradients::ZerosLike(net);
  Tensor delta = upstream;
  for (std::size_t l = net.num_layers(); l-- > 0;) {
    const Layer& layer = net.layer(l);
    const Tensor& pre = tape.pre[l];
    auto d = delta.data();
    auto p = pre.data();
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] *= ActivateDeriv(layer.activation, p[i]);
    }
    LayerGradient& g = res.grads.layer(l);
    g.dw = MatMulTransA(delta, tape.inputs[l]);
    auto db = g.db.data();
    for (std::size_t r = 0; r < n; ++r) {
      auto row = delta.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) db[c] += row[c];
    }
    delta = MatMul(delta, layer.weight);
  }
  res.dx = std::move(delta);
  return res;
}

namespace {

// Forward tangent pass at one point: T_l = diag(act'(pre_l)) W_l T_{l-1},
// T_0 = I. Everything needed by the penalty gradient is retained.
struct TangentRecord {
  std::vector<std::vector<double>> inputs;  // a_{l-1}
  std::vector<std::vector<double>> pre;
  std::vector<Tensor> p;  // W_l T_{l-1}
  std::vector<Tensor> t;  // diag(s_l) P_l
};

TangentRecord TangentForward(const Network& net, const Tensor& x) {
  TangentRecord rec;
  const std::size_t layers = net.num_layers();
  rec.inputs.reserve(layers);
  rec.pre.reserve(layers);
  rec.p.reserve(layers);
  rec.t.reserve(layers);
  std::vector<double> a(x.data().begin(), x.data().end());
  for (std::size_t l = 0; l < layers; ++l) {
    const Layer& layer = net.layer(l);
    const std::size_t out = layer.out_dim();
    std::vector<double> pre(out);
    for (std::size_t i = 0; i < out; ++i) {
      const auto w = layer.weight.row(i);
      double s = layer.bias(i, 0);
      for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * a[j];
      pre[i] = s;
    }
    Tensor p = l == 0 ? layer.weight : MatMul(layer.weight, rec.t.back());
    Tensor t = p;
    for (std::size_t i = 0; i < out; ++i) {
      const double s = ActivateDeriv(layer.activation, pre[i]);
      for (double& v : t.row(i)) v *= s;
    }
    std::vector<double> next(out);
    for (std::size_t i = 0; i < out; ++i) {
      next[i] = Activate(layer.activation, pre[i]);
    }
    rec.inputs.push_back(std::move(a));
    rec.pre.push_back(std::move(pre));
    rec.p.push_back(std::move(p));
    rec.t.push_back(std::move(t));
    a = std::move(next);
  }
  return rec;
}

}  // namespace

Tensor Jacobian(const Network& net, const Tensor& x) {
  CheckPoint(net, x, "Jacobian");
  return TangentForward(net, x).t.back();
}

double JacobianFrobeniusSq(const Network& net, const Tensor& x) {
  return Jacobian(net, x).SquaredNorm();
}

double AccumulateJacobianPenalty(const Network& net, const Tensor& x,
                                 double scale, Gradients* accum) {
  CheckPoint(net, x, "AccumulateJacobianPenalty");
  if (accum == nullptr || !accum->CongruentWith(net)) {
    throw std::invalid_argument(
        "AccumulateJacobianPenalty: gradient buffer does not match network");
  }
  for (const Layer& layer : net.layers()) {
    if (!IsSmooth(layer.activation)) {
      throw std::invalid_argument(
          "AccumulateJacobianPenalty: non-smooth activation");
    }
  }
  TangentRecord rec = TangentForward(net, x);
  const double value = rec.t.back().SquaredNorm();

  // Reverse over the tangent recursion. G is dR/dT_l, da is dR/da_l.
  Tensor g = rec.t.back();
  for (double& v : g.data()) v *= 2.0;
  std::vector<double> da(net.out_dim(), 0.0);

  for (std::size_t l = net.num_layers(); l-- > 0;) {
    const Layer& layer = net.layer(l);
    const std::size_t out = layer.out_dim();
    const std::size_t in = layer.in_dim();
    const Tensor& p = rec.p[l];
    const auto& pre = rec.pre[l];

    Tensor dp = g;
    std::vector<double> dpre(out);
    for (std::size_t i = 0; i < out; ++i) {
      const double s = ActivateDeriv(layer.activation, pre[i]);
      const double s2 = ActivateSecondDeriv(layer.activation, pre[i]);
      const auto gi = g.row(i);
      const auto pi = p.row(i);
      double ds = 0.0;
      for (std::size_t j = 0; j < gi.size(); ++j) ds += gi[j] * pi[j];
      for (double& v : dp.row(i)) v *= s;
      dpre[i] = da[i] * s + ds * s2;
    }

    LayerGradient& lg = accum->layer(l);
    const auto& a_in = rec.inputs[l];
    for (std::size_t i = 0; i < out; ++i) {
      auto dw = lg.dw.row(i);
      const double c = scale * dpre[i];
      for (std::size_t j = 0; j < in; ++j) dw[j] += c * a_in[j];
      lg.db(i, 0) += c;
    }
    if (l == 0) {
      auto dw = lg.dw.data();
      auto src = dp.data();
      for (std::size_t k = 0; k < dw.size(); ++k) dw[k] += scale * src[k];
      break;
    }
    Tensor via_t = MatMulTransB(dp, rec.t[l - 1]);
    auto dw = lg.dw.data();
    auto src = via_t.data();
    for (std::size_t k = 0; k < dw.size(); ++k) dw[k] += scale * src[k];

    std::vector<double> da_prev(in, 0.0);
    for (std::size_t i = 0; i < out; ++i) {
      const auto w = layer.weight.row(i);
      for (std::size_t j = 0; j < in; ++j) da_prev[j] += w[j] * dpre[i];
    }
    da = std::move(da_prev);
    g = MatMulTransA(layer.weight, dp);
  }
  return value;
}

Gradients GradJacobianPenalty(const Network& net, const Tensor& x) {
  Gradients g = Gradients::ZerosLike(net);
  AccumulateJacobianPenalty(net, x, 1.0, &g);
  return g;
}

}  // namespace invgen::diffcore
