// invgen/theory/bounds.cpp

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

#include "invgen/theory/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "invgen/diffcore/autodiff.hpp"
#include "invgen/theory/distances.hpp"

namespace invgen::theory {

double BoundReport::Term(std::string_view name) const {
  for (const auto& [key, value] : rhs_terms) {
    if (key == name) return value;
  }
  throw std::out_of_range("BoundReport: no term '" + std::string(name) + "'");
}

Tensor LatentConditionals(const DiscreteWorld& world, std::size_t env) {
  if (env >= world.n_env) {
    throw std::invalid_argument("LatentConditionals: environment out of range");
  }
  return diffcore::MatMul(world.px_given_y[env], world.channel);
}

double BerThroughChannel(const DiscreteWorld& world, std::size_t env,
                         std::span<const int> h) {
  if (h.size() != world.n_z) {
    throw std::invalid_argument("BerThroughChannel: h must cover every z");
  }
  for (int c : h) {
    if (c < 0 || static_cast<std::size_t>(c) >= world.n_y) {
      throw std::invalid_argument("BerThroughChannel: h label out of range");
    }
  }
  const Tensor latent = LatentConditionals(world, env);
  double ber = 0.0;
  for (std::size_t y = 0; y < world.n_y; ++y) {
    double err = 0.0;
    for (std::size_t z = 0; z < world.n_z; ++z) {
      if (static_cast<std::size_t>(h[z]) != y) err += latent(y, z);
    }
    ber += err;
  }
  return ber / static_cast<double>(world.n_y);
}

BoundReport Theorem1Verify(const DiscreteWorld& world, std::span<const int> h) {
  world.Validate();
  std::vector<std::size_t> sources;
  for (std::size_t t = 0; t < world.n_env; ++t) {
    if (t != world.test_env_index) sources.push_back(t);
  }
  if (sources.empty()) throw std::invalid_argument("Theorem1Verify: no sources");

  std::vector<Tensor> latent;
  latent.reserve(world.n_env);
  for (std::size_t t = 0; t < world.n_env; ++t) {
    latent.push_back(LatentConditionals(world, t));
  }

  double avg = 0.0;
  for (std::size_t t : sources) avg += BerThroughChannel(world, t, h);
  avg /= static_cast<double>(sources.size());

  double kappa = 0.0;
  for (std::size_t a = 0; a < sources.size(); ++a) {
    for (std::size_t b = a + 1; b < sources.size(); ++b) {
      for (std::size_t y = 0; y < world.n_y; ++y) {
        kappa = std::max(kappa, TvDiscrete(latent[sources[a]].row(y),
                                           latent[sources[b]].row(y)));
      }
    }
  }

  const double alpha = DobrushinExact(world.channel);
  const Tensor& test_x = world.px_given_y[world.test_env_index];
  double epsilon = std::numeric_limits<double>::infinity();
  for (std::size_t t : sources) {
    double worst_y = 0.0;
    for (std::size_t y = 0; y < world.n_y; ++y) {
      worst_y = std::max(worst_y,
                         TvDiscrete(test_x.row(y), world.px_given_y[t].row(y)));
    }
    epsilon = std::min(epsilon, worst_y);
  }

  BoundReport r;
  r.lhs = BerThroughChannel(world, world.test_env_index, h);
  const double total = avg + kappa + alpha * epsilon;
  r.rhs_terms = {{"avg_source_ber", avg},
                 {"kappa", kappa},
                 {"alpha_tv", alpha},
                 {"epsilon", epsilon},
                 {"rhs_total", total}};
  r.slack = total - r.lhs;
  r.holds = r.slack >= -kBoundTolerance;
  return r;
}

Lemma1Report Lemma1Verify(const DiscreteWorld& world) {
  world.Validate();
  const double uniform = 1.0 / static_cast<double>(world.n_y);
  for (const auto& py : world.py) {
    for (double p : py) {
      if (std::abs(p - uniform) > 1e-12) {
        throw std::invalid_argument("Lemma1Verify: label marginal is not uniform");
      }
    }
  }
  const std::size_t ny = world.n_y, nz = world.n_z;
  std::vector<Tensor> cond;        // S_t(z|y)
  std::vector<std::vector<double>> marg;  // S_t(z)
  for (std::size_t t = 0; t < world.n_env; ++t) {
    cond.push_back(LatentConditionals(world, t));
    std::vector<double> m(nz, 0.0);
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t z = 0; z < nz; ++z) m[z] += world.py[t][y] * cond[t](y, z);
    }
    marg.push_back(std::move(m));
  }

  Lemma1Report r;
  for (std::size_t i = 0; i < world.n_env; ++i) {
    for (std::size_t j = i + 1; j < world.n_env; ++j) {
      for (std::size_t y = 0; y < ny; ++y) {
        r.kappa = std::max(r.kappa, TvDiscrete(cond[i].row(y), cond[j].row(y)));
      }
    }
  }

  r.label_slack = std::numeric_limits<double>::infinity();
  double label_slack_l1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < world.n_env; ++i) {
    for (std::size_t j = 0; j < world.n_env; ++j) {
      if (i == j) continue;
      std::vector<std::size_t> omega;
      for (std::size_t z = 0; z < nz; ++z) {
        if (marg[i][z] > 0.0 && marg[j][z] > 0.0) omega.push_back(z);
      }
      if (omega.empty()) {
        throw std::domain_error("Lemma1Verify: supports do not intersect");
      }
      double inf_sum = std::numeric_limits<double>::infinity();
      double marginal_l1 = 0.0;
      for (std::size_t z : omega) {
        double s = 0.0;
        for (std::size_t y = 0; y < ny; ++y) s += cond[j](y, z);
        inf_sum = std::min(inf_sum, s);
        marginal_l1 += std::abs(marg[i][z] - marg[j][z]);
      }
      const double c1 = 1.0 / inf_sum;
      const double rhs = c1 * (1.0 + static_cast<double>(ny)) * r.kappa;
      r.marginal_gap = std::max(r.marginal_gap, 0.5 * marginal_l1);
      r.marginal_gap_l1 = std::max(r.marginal_gap_l1, marginal_l1);
      for (std::size_t y = 0; y < ny; ++y) {
        double gap_l1 = 0.0;
        for (std::size_t z : omega) {
          const double pi = world.py[i][y] * cond[i](y, z) / marg[i][z];
          const double pj = world.py[j][y] * cond[j](y, z) / marg[j][z];
          gap_l1 += std::abs(pi - pj);
        }
        const double slack = rhs - 0.5 * gap_l1;
        if (slack < r.label_slack) {
          r.label_slack = slack;
          r.label_cond_gap = 0.5 * gap_l1;
          r.c_plus_kappa = rhs;
          r.c1 = c1;
        }
        label_slack_l1 = std::min(label_slack_l1, rhs - gap_l1);
        r.label_gap_l1 = std::max(r.label_gap_l1, gap_l1);
      }
    }
  }
  r.marginal_slack = r.kappa - r.marginal_gap;
  r.holds = r.label_slack >= -kBoundTolerance &&
            r.marginal_slack >= -kBoundTolerance;
  r.holds_l1 = label_slack_l1 >= -kBoundTolerance &&
               r.kappa - r.marginal_gap_l1 >= -kBoundTolerance;
  return r;
}

SdpiReport SdpiVerify(const Tensor& channel, std::span<const double> p0,
                      std::span<const double> p1) {
  if (p0.size() != channel.rows() || p1.size() != channel.rows()) {
    throw std::invalid_argument("SdpiVerify: input length must equal channel rows");
  }
  SdpiReport r;
  r.tv_in = TvDiscrete(p0, p1);
  r.alpha = DobrushinExact(channel);
  std::vector<double> m0(channel.cols(), 0.0), m1(channel.cols(), 0.0);
  for (std::size_t x = 0; x < channel.rows(); ++x) {
    const auto row = channel.row(x);
    for (std::size_t z = 0; z < row.size(); ++z) {
      m0[z] += p0[x] * row[z];
      m1[z] += p1[x] * row[z];
    }
  }
  r.tv_out = TvDiscrete(m0, m1);
  r.rhs = r.alpha * r.tv_in;
  r.slack = r.rhs - r.tv_out;
  r.holds = r.slack >= -kBoundTolerance;
  return r;
}

SdpiReport SdpiVerify(const DiscreteWorld& world, std::span<const double> p0,
                      std::span<const double> p1) {
  world.Validate();
  return SdpiVerify(world.channel, p0, p1);
}

namespace {

void CheckBinaryLabels(std::span<const int> labels, std::size_t rows,
                       const char* what) {
  if (labels.size() != rows || rows == 0) {
    throw std::invalid_argument(std::string(what) + ": need one label per sample");
  }
  for (int y : labels) {
    if (y != -1 && y != 1) {
      throw std::invalid_argument(std::string(what) + ": labels must be -1 or +1");
    }
  }
}

}  // namespace

TaylorReport AugmentationTaylorVerify(std::span<const double> w,
                                      const Network& phi, const Tensor& xt,
                                      std::span<const int> labels) {
  CheckBinaryLabels(labels, xt.rows(), "AugmentationTaylorVerify");
  if (phi.out_dim() != w.size()) {
    throw std::invalid_argument("AugmentationTaylorVerify: w does not match phi");
  }
  const Tensor feats = diffcore::Predict(phi, xt);
  const std::size_t n = xt.rows();
  std::vector<double> pred(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto f = feats.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * f[k];
    pred[i] = s;
  }
  double w_sq = 0.0;
  for (double v : w) w_sq += v * v;

  TaylorReport r;
  for (int y : {-1, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == y) idx.push_back(i);
    }
    if (idx.empty()) continue;
    const double weight = static_cast<double>(idx.size()) / static_cast<double>(n);
    const double cnt = static_cast<double>(idx.size());
    // w^T E[phi] equals E[w^T phi], so the centroid prediction is the mean.
    double mean_pred = 0.0;
    for (std::size_t i : idx) mean_pred += pred[i];
    mean_pred /= cnt;
    double var_pred = 0.0, loss = 0.0;
    for (std::size_t i : idx) {
      var_pred += (pred[i] - mean_pred) * (pred[i] - mean_pred);
      loss += LogisticLoss(pred[i], y);
    }
    var_pred /= cnt;
    loss /= cnt;
    std::vector<double> mean_x(xt.cols(), 0.0);
    for (std::size_t i : idx) {
      const auto row = xt.row(i);
      for (std::size_t c = 0; c < row.size(); ++c) mean_x[c] += row[c] / cnt;
    }
    double var_x = 0.0;
    for (std::size_t i : idx) {
      const auto row = xt.row(i);
      for (std::size_t c = 0; c < row.size(); ++c) {
        var_x += (row[c] - mean_x[c]) * (row[c] - mean_x[c]);
      }
    }
    var_x /= cnt;
    const double second = LogisticSecondDeriv(mean_pred);
    r.r_aug += weight * loss;
    r.g1 += weight * LogisticLoss(mean_pred, y);
    r.g2 += weight * 0.5 * var_pred * second;
    r.half_var_pred += weight * 0.5 * var_pred;
    r.var_x += weight * var_x;
    r.max_second_deriv = std::max(r.max_second_deriv, second);
  }
  r.second_order_sum = r.g1 + r.g2;
  r.remainder = std::abs(r.r_aug - r.second_order_sum);
  bool distinct = false;
  for (std::size_t i = 1; i < n && !distinct; ++i) {
    const auto a = xt.row(0), b = xt.row(i);
    distinct = !std::equal(a.begin(), a.end(), b.begin());
  }
  r.lipschitz_hat = distinct ? LipschitzEmpirical(phi, xt) : 0.0;
  r.var_bound = r.lipschitz_hat * r.lipschitz_hat * w_sq / 4.0 * r.var_x;
  r.holds_pair = r.g2 <= r.half_var_pred + kBoundTolerance &&
                 r.g2 <= r.var_bound + kBoundTolerance;
  return r;
}

Tensor ShrinkCloud(const Tensor& xt, std::span<const int> labels, double factor) {
  CheckBinaryLabels(labels, xt.rows(), "ShrinkCloud");
  if (!(factor >= 0.0 && factor <= 1.0)) {
    throw std::invalid_argument("ShrinkCloud: factor must be in [0, 1]");
  }
  Tensor out = xt;
  for (int y : {-1, 1}) {
    std::vector<double> mean(xt.cols(), 0.0);
    double cnt = 0.0;
    for (std::size_t i = 0; i < xt.rows(); ++i) {
      if (labels[i] != y) continue;
      cnt += 1.0;
      const auto row = xt.row(i);
      for (std::size_t c = 0; c < row.size(); ++c) mean[c] += row[c];
    }
    if (cnt == 0.0) continue;
    for (double& m : mean) m /= cnt;
    for (std::size_t i = 0; i < xt.rows(); ++i) {
      if (labels[i] != y) continue;
      auto row = out.row(i);
      for (std::size_t c = 0; c < row.size(); ++c) {
        row[c] = mean[c] + factor * (row[c] - mean[c]);
      }
    }
  }
  return out;
}

TaylorScaling TaylorRemainderScaling(std::span<const double> w,
                                     const Network& phi, const Tensor& xt,
                                     std::span<const int> labels, double shrink) {
  TaylorScaling s;
  s.shrink = shrink;
  s.wide = AugmentationTaylorVerify(w, phi, xt, labels);
  s.narrow = AugmentationTaylorVerify(w, phi, ShrinkCloud(xt, labels, shrink),
                                      labels);
  s.remainder_ratio =
      s.wide.remainder > 0.0 ? s.narrow.remainder / s.wide.remainder : 0.0;
  return s;
}

Lemma2Report Lemma2Verify(const GaussianChannelConfig& config,
                          std::size_t grid_points, std::size_t mc_samples,
                          std::uint64_t seed) {
  const Tensor& a = config.a;
  if (a.empty()) throw std::invalid_argument("Lemma2Verify: empty map");
  if (!(config.box > 0.0)) throw std::invalid_argument("Lemma2Verify: box must be > 0");
  if (grid_points < 2) throw std::invalid_argument("Lemma2Verify: need >= 2 grid points");
  const std::size_t d_in = a.cols();

  std::size_t total = 1;
  for (std::size_t k = 0; k < d_in; ++k) total *= grid_points;
  Tensor grid(total, d_in);
  for (std::size_t g = 0; g < total; ++g) {
    std::size_t rem = g;
    for (std::size_t k = 0; k < d_in; ++k) {
      grid(g, k) = config.box * static_cast<double>(rem % grid_points) /
                   static_cast<double>(grid_points - 1);
      rem /= grid_points;
    }
  }
  const Network phi({diffcore::Layer{a, Tensor(a.rows(), 1),
                                     diffcore::Activation::kIdentity}});
  const Tensor z = diffcore::Predict(phi, grid);

  std::size_t best_a = 0, best_b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < z.cols(); ++c) {
        const double d = z(i, c) - z(j, c);
        s += d * d;
      }
      if (s > best) {
        best = s;
        best_a = i;
        best_b = j;
      }
    }
  }

  Lemma2Report r;
  r.d = static_cast<int>(a.rows());
  r.d_in = static_cast<int>(d_in);
  r.sigma = config.sigma;
  r.d_max = config.box * std::sqrt(static_cast<double>(d_in));
  r.l_true = SpectralNorm(a);
  r.l_hat = LipschitzEmpirical(phi, grid);
  r.tv_mc = TvGaussianMonteCarlo(z.row(best_a), z.row(best_b), config.sigma,
                                 mc_samples, seed);
  r.tv_exact = TvGaussianExact(z.row(best_a), z.row(best_b), config.sigma);
  r.bound = DobrushinLipschitzBound(r.l_true, r.d_max, r.d, config.sigma);
  r.bound_without_d = DobrushinLipschitzBound(r.l_true, r.d_max, 1, config.sigma);
  r.slack = r.bound - (r.tv_mc - kLemma2Tolerance);
  r.holds = r.slack >= 0.0;
  r.holds_without_d = r.bound_without_d >= r.tv_mc - kLemma2Tolerance;
  return r;
}

}  // namespace invgen::theory
