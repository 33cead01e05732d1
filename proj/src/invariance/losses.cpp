// invgen/invariance/losses.cpp

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

#include "invgen/invariance/losses.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "invgen/diffcore/autodiff.hpp"

namespace invgen::invariance {

using diffcore::Backward;
using diffcore::Forward;

void Batch::Validate(int n_classes, int n_envs) const {
  if (ys.empty()) throw std::invalid_argument("batch is empty");
  if (xs.rows() != ys.size() || envs.size() != ys.size()) {
    throw std::invalid_argument("batch: xs, ys and envs differ in length");
  }
  for (int y : ys) {
    if (y < 0 || y >= n_classes) {
      throw std::invalid_argument("batch: label " + std::to_string(y) + " out of range");
    }
  }
  for (int e : envs) {
    if (e < 0 || e >= n_envs) {
      throw std::invalid_argument("batch: environment id " + std::to_string(e) +
                                  " out of range");
    }
  }
}

std::vector<std::vector<std::size_t>> Batch::EnvIndex(int n_envs) const {
  std::vector<std::vector<std::size_t>> out(n_envs);
  for (std::size_t i = 0; i < envs.size(); ++i) out.at(envs[i]).push_back(i);
  return out;
}

std::string_view CriterionName(Criterion c) {
  switch (c) {
    case Criterion::kErm: return "ERM";
    case Criterion::kDann: return "DANN";
    case Criterion::kCdann: return "CDANN";
    case Criterion::kIrm: return "IRM";
  }
  return "?";
}

Criterion ParseCriterion(std::string_view name) {
  if (name == "ERM") return Criterion::kErm;
  if (name == "DANN") return Criterion::kDann;
  if (name == "CDANN") return Criterion::kCdann;
  if (name == "IRM") return Criterion::kIrm;
  throw std::invalid_argument("unknown criterion '" + std::string(name) +
                              "' (expected ERM, DANN, CDANN or IRM)");
}

bool IsAdversarial(Criterion c) {
  return c == Criterion::kDann || c == Criterion::kCdann;
}

void ObjectiveConfig::Validate() const {
  if (!std::isfinite(lambda0) || lambda0 < 0.0 || !std::isfinite(lambda1) ||
      lambda1 < 0.0) {
    throw std::invalid_argument("objective: lambda0 and lambda1 must be finite and >= 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("objective: beta must be > 0");
  }
  if (n_classes < 2) throw std::invalid_argument("objective: n_classes must be >= 2");
  if (n_envs < 1) throw std::invalid_argument("objective: n_envs must be >= 1");
  if (IsAdversarial(criterion) && n_envs < 2) {
    throw std::invalid_argument("objective: a domain discriminator needs >= 2 environments");
  }
}

CeResult CrossEntropy(std::span<const double> logits, int y) {
  const std::size_t k = logits.size();
  if (k < 2) throw std::invalid_argument("CrossEntropy: need >= 2 logits");
  if (y < 0 || static_cast<std::size_t>(y) >= k) {
    throw std::invalid_argument("CrossEntropy: label " + std::to_string(y) +
                                " out of range");
  }
  std::size_t top = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (logits[j] > logits[top]) top = j;
  }
  const double m = logits[top];
  double rest = 0.0;
  CeResult res;
  res.dlogits.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    res.dlogits[j] = std::exp(logits[j] - m);
    if (j != top) rest += res.dlogits[j];
  }
  const double log_z = std::log1p(rest);
  res.loss = log_z + (m - logits[y]);
  const double z = 1.0 + rest;
  for (double& v : res.dlogits) v /= z;
  res.dlogits[y] -= 1.0;
  return res;
}

namespace {

void CheckChain(const Network& phi, const Network& next, const char* what) {
  if (phi.out_dim() != next.in_dim()) {
    throw std::invalid_argument(std::string(what) + ": phi output dim " +
                                std::to_string(phi.out_dim()) +
                                " does not match next input dim " +
                                std::to_string(next.in_dim()));
  }
}

// Adds d(balanced risk)/d(logits) into dlogits and returns the risk.
double BalancedRiskTerm(const Tensor& logits, const Batch& batch, int n_classes,
                        int n_envs, Tensor* dlogits) {
  std::vector<std::vector<double>> count(n_envs, std::vector<double>(n_classes, 0.0));
  for (std::size_t i = 0; i < batch.size(); ++i) count[batch.envs[i]][batch.ys[i]] += 1;
  std::vector<bool> class_seen(n_classes, false);
  int envs_present = 0;
  std::vector<int> classes_in_env(n_envs, 0);
  for (int e = 0; e < n_envs; ++e) {
    for (int c = 0; c < n_classes; ++c) {
      if (count[e][c] > 0) {
        ++classes_in_env[e];
        class_seen[c] = true;
      }
    }
    if (classes_in_env[e] > 0) ++envs_present;
  }
  for (int c = 0; c < n_classes; ++c) {
    if (!class_seen[c]) {
      throw std::invalid_argument("balanced risk: class " + std::to_string(c) +
                                  " is absent from every environment");
    }
  }
  double risk = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const int e = batch.envs[i], c = batch.ys[i];
    const double w = 1.0 / (envs_present * classes_in_env[e] * count[e][c]);
    CeResult ce = CrossEntropy(logits.row(i), c);
    risk += w * ce.loss;
    auto d = dlogits->row(i);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += w * ce.dlogits[j];
  }
  return risk;
}

void CheckEnvsNonEmpty(const std::vector<std::vector<std::size_t>>& by_env,
                       const char* what) {
  for (std::size_t t = 0; t < by_env.size(); ++t) {
    if (by_env[t].empty()) {
      throw std::invalid_argument(std::string(what) + ": environment " +
                                  std::to_string(t) + " has no samples");
    }
  }
}

// f_i = <softmax(l) - e_y, l>, the per-sample derivative of CE(w l) at w = 1.
double ScaleDerivative(std::span<const double> l, int y, std::vector<double>* df) {
  CeResult ce = CrossEntropy(l, y);
  double f = 0.0, lbar = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j) {
    f += ce.dlogits[j] * l[j];
    const double p = ce.dlogits[j] + (static_cast<int>(j) == y ? 1.0 : 0.0);
    lbar += p * l[j];
  }
  if (df != nullptr) {
    df->resize(l.size());
    for (std::size_t j = 0; j < l.size(); ++j) {
      const double p = ce.dlogits[j] + (static_cast<int>(j) == y ? 1.0 : 0.0);
      (*df)[j] = p * (1.0 + l[j] - lbar) - (static_cast<int>(j) == y ? 1.0 : 0.0);
    }
  }
  return f;
}

// Adds scale * d(penalty)/d(logits) into dlogits and returns the penalty.
double IrmTerm(const Tensor& logits, const Batch& batch, int n_envs, double scale,
               Tensor* dlogits) {
  const auto by_env = batch.EnvIndex(n_envs);
  CheckEnvsNonEmpty(by_env, "IRM penalty");
  double penalty = 0.0;
  std::vector<double> df;
  for (int t = 0; t < n_envs; ++t) {
    const double n_t = static_cast<double>(by_env[t].size());
    double g = 0.0;
    for (std::size_t i : by_env[t]) g += ScaleDerivative(logits.row(i), batch.ys[i], nullptr);
    g /= n_t;
    penalty += g * g / n_envs;
    if (dlogits == nullptr) continue;
    const double coef = scale * 2.0 * g / (n_envs * n_t);
    for (std::size_t i : by_env[t]) {
      ScaleDerivative(logits.row(i), batch.ys[i], &df);
      auto d = dlogits->row(i);
      for (std::size_t j = 0; j < d.size(); ++j) d[j] += coef * df[j];
    }
  }
  return penalty;
}

struct AdversarialTerm {
  double inv_loss = 0.0;
  Tensor dz;  // d(inv_loss)/dz, unscaled
  Gradients disc;
};

AdversarialTerm DomainTerm(const Tensor& z, const Batch& batch, const Network& disc,
                           bool conditional, int n_classes, int n_envs,
                           double lambda0) {
  if (n_envs < 2) {
    throw std::invalid_argument("domain discriminator needs >= 2 environments");
  }
  if (disc.out_dim() != static_cast<std::size_t>(n_envs)) {
    throw std::invalid_argument("discriminator output dim " +
                                std::to_string(disc.out_dim()) + " != n_envs " +
                                std::to_string(n_envs));
  }
  const std::size_t latent = z.cols();
  const std::size_t in = latent + (conditional ? n_classes : 0);
  if (disc.in_dim() != in) {
    throw std::invalid_argument("discriminator input dim " + std::to_string(disc.in_dim()) +
                                " != expected " + std::to_string(in));
  }
  const auto by_env = batch.EnvIndex(n_envs);
  CheckEnvsNonEmpty(by_env, "domain loss");

  Tensor input = z;
  if (conditional) {
    input = Tensor(z.rows(), in);
    for (std::size_t i = 0; i < z.rows(); ++i) {
      auto src = z.row(i);
      auto dst = input.row(i);
      std::copy(src.begin(), src.end(), dst.begin());
      dst[latent + batch.ys[i]] = 1.0;
    }
  }
  auto fwd = Forward(disc, input);
  Tensor up(input.rows(), disc.out_dim());
  AdversarialTerm term;
  for (int t = 0; t < n_envs; ++t) {
    const double w = 1.0 / (n_envs * static_cast<double>(by_env[t].size()));
    for (std::size_t i : by_env[t]) {
      CeResult ce = CrossEntropy(fwd.output.row(i), t);
      term.inv_loss += w * ce.loss;
      auto u = up.row(i);
      for (std::size_t j = 0; j < u.size(); ++j) u[j] = w * ce.dlogits[j];
    }
  }
  auto back = Backward(disc, fwd.tape, up);
  term.disc = std::move(back.grads);
  term.disc.Scale(lambda0);
  term.dz = Tensor(z.rows(), latent);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto src = back.dx.row(i);
    std::copy(src.begin(), src.begin() + latent, term.dz.row(i).begin());
  }
  return term;
}

AdversarialResult AdversarialLoss(const Network& phi, const Network& disc,
                                  const Batch& batch, bool conditional,
                                  int n_classes, int n_envs, double lambda0) {
  batch.Validate(n_classes, n_envs);
  auto phi_fwd = Forward(phi, batch.xs);
  AdversarialTerm term = DomainTerm(phi_fwd.output, batch, disc, conditional,
                                    n_classes, n_envs, lambda0);
  for (double& v : term.dz.data()) v *= -lambda0;
  AdversarialResult res;
  res.inv_loss = term.inv_loss;
  res.phi = Backward(phi, phi_fwd.tape, term.dz).grads;
  res.disc = std::move(term.disc);
  return res;
}

std::vector<Tensor> SplitByEnv(const Batch& batch, int n_envs) {
  std::vector<Tensor> out;
  for (const auto& rows : batch.EnvIndex(n_envs)) out.push_back(batch.xs.Gather(rows));
  return out;
}

}  // namespace

LossResult BalancedRisk(const Network& h, const Network& phi, const Batch& batch,
                        int n_classes, int n_envs) {
  batch.Validate(n_classes, n_envs);
  CheckChain(phi, h, "balanced risk");
  auto phi_fwd = Forward(phi, batch.xs);
  auto h_fwd = Forward(h, phi_fwd.output);
  Tensor dlogits(batch.size(), h.out_dim());
  LossResult res;
  res.value = BalancedRiskTerm(h_fwd.output, batch, n_classes, n_envs, &dlogits);
  auto hb = Backward(h, h_fwd.tape, dlogits);
  res.h = std::move(hb.grads);
  res.phi = Backward(phi, phi_fwd.tape, hb.dx).grads;
  return res;
}

std::vector<int> PredictClasses(const Network& h, const Network& phi,
                                const Tensor& xs) {
  Tensor logits = diffcore::Predict(h, diffcore::Predict(phi, xs));
  std::vector<int> preds(xs.rows());
  for (std::size_t i = 0; i < xs.rows(); ++i) {
    auto row = logits.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] > row[best]) best = j;
    }
    preds[i] = static_cast<int>(best);
  }
  return preds;
}

double BerFromPredictions(std::span<const int> ys, std::span<const int> preds,
                          int n_classes) {
  if (ys.size() != preds.size()) {
    throw std::invalid_argument("BER: label and prediction counts differ");
  }
  std::vector<double> wrong(n_classes, 0.0), count(n_classes, 0.0);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    count.at(ys[i]) += 1;
    wrong[ys[i]] += preds[i] != ys[i];
  }
  double ber = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    if (count[c] == 0) {
      throw std::invalid_argument("BER: class " + std::to_string(c) + " has no samples");
    }
    ber += wrong[c] / count[c];
  }
  return ber / n_classes;
}

double BerEval(const Network& h, const Network& phi, const envbench::Environment& env) {
  env.Validate();
  if (h.out_dim() != static_cast<std::size_t>(env.n_classes)) {
    throw std::invalid_argument("BerEval: classifier output dim does not match classes");
  }
  const auto preds = PredictClasses(h, phi, env.xs);
  return BerFromPredictions(env.ys, preds, env.n_classes);
}

AdversarialResult DannLoss(const Network& phi, const Network& disc,
                           const Batch& batch, int n_envs, double lambda0) {
  int n_classes = 1;
  for (int y : batch.ys) n_classes = std::max(n_classes, y + 1);
  return AdversarialLoss(phi, disc, batch, false, n_classes, n_envs, lambda0);
}

AdversarialResult CdannLoss(const Network& phi, const Network& disc,
                            const Batch& batch, int n_classes, int n_envs,
                            double lambda0) {
  return AdversarialLoss(phi, disc, batch, true, n_classes, n_envs, lambda0);
}

std::vector<double> IrmScaleGradients(const Tensor& logits, const Batch& batch,
                                      int n_envs) {
  const auto by_env = batch.EnvIndex(n_envs);
  CheckEnvsNonEmpty(by_env, "IRM scale gradient");
  std::vector<double> g(n_envs, 0.0);
  for (int t = 0; t < n_envs; ++t) {
    for (std::size_t i : by_env[t]) {
      g[t] += ScaleDerivative(logits.row(i), batch.ys[i], nullptr);
    }
    g[t] /= static_cast<double>(by_env[t].size());
  }
  return g;
}

LossResult IrmPenalty(const Network& h, const Network& phi, const Batch& batch,
                      int n_envs) {
  batch.Validate(static_cast<int>(h.out_dim()), n_envs);
  CheckChain(phi, h, "IRM penalty");
  auto phi_fwd = Forward(phi, batch.xs);
  auto h_fwd = Forward(h, phi_fwd.output);
  Tensor dlogits(batch.size(), h.out_dim());
  LossResult res;
  res.value = IrmTerm(h_fwd.output, batch, n_envs, 1.0, &dlogits);
  auto hb = Backward(h, h_fwd.tape, dlogits);
  res.h = std::move(hb.grads);
  res.phi = Backward(phi, phi_fwd.tape, hb.dx).grads;
  return res;
}

std::vector<double> DirichletSample(double beta, std::size_t t, CounterRng& rng) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("DirichletSample: beta must be > 0");
  }
  if (t == 0) throw std::invalid_argument("DirichletSample: T must be >= 1");
  if (t == 1) return {1.0};
  std::gamma_distribution<double> gamma(beta, 1.0);
  std::vector<double> g(t);
  double sum = 0.0;
  for (double& v : g) {
    v = gamma(rng);
    sum += v;
  }
  if (!(sum > 0.0)) {
    // Every draw underflowed (tiny beta); the limit is a random vertex.
    std::fill(g.begin(), g.end(), 0.0);
    g[rng.Index(t)] = 1.0;
    return g;
  }
  for (double& v : g) v /= sum;
  return g;
}

Tensor VirtualSample(std::span<const Tensor> per_env_xs,
                     std::span<const double> gamma) {
  if (per_env_xs.empty() || per_env_xs.size() != gamma.size()) {
    throw std::invalid_argument("VirtualSample: need one sample per weight");
  }
  const std::size_t d = per_env_xs[0].cols();
  Tensor out(1, d);
  auto o = out.data();
  for (std::size_t t = 0; t < per_env_xs.size(); ++t) {
    const Tensor& x = per_env_xs[t];
    if (x.rows() != 1 || x.cols() != d) {
      throw std::invalid_argument("VirtualSample: samples must be 1 x d rows of equal d");
    }
    auto xs = x.data();
    for (std::size_t k = 0; k < d; ++k) o[k] += gamma[t] * xs[k];
  }
  return out;
}

namespace {

double RegularizerImpl(const Network& phi, std::span<const Tensor> per_env_batches,
                       double beta, CounterRng& rng, std::size_t m,
                       Gradients* grads) {
  if (m == 0) throw std::invalid_argument("regularizer: m must be >= 1");
  if (per_env_batches.empty()) throw std::invalid_argument("regularizer: no environments");
  for (const Tensor& b : per_env_batches) {
    if (b.rows() == 0) throw std::invalid_argument("regularizer: empty environment batch");
    if (b.cols() != phi.in_dim()) {
      throw std::invalid_argument("regularizer: batch dim does not match phi");
    }
  }
  const std::size_t t = per_env_batches.size();
  const std::size_t d = phi.in_dim();
  const double scale = 1.0 / static_cast<double>(m);
  double total = 0.0;
  Tensor x(1, d);
  for (std::size_t draw = 0; draw < m; ++draw) {
    const std::vector<double> gamma = DirichletSample(beta, t, rng);
    x.Fill(0.0);
    auto o = x.data();
    for (std::size_t e = 0; e < t; ++e) {
      auto row = per_env_batches[e].row(rng.Index(per_env_batches[e].rows()));
      for (std::size_t k = 0; k < d; ++k) o[k] += gamma[e] * row[k];
    }
    if (grads != nullptr) {
      total += diffcore::AccumulateJacobianPenalty(phi, x, scale, grads);
    } else {
      total += diffcore::JacobianFrobeniusSq(phi, x);
    }
  }
  return total * scale;
}

}  // namespace

double Regularizer(const Network& phi, std::span<const Tensor> per_env_batches,
                   double beta, CounterRng& rng, std::size_t m) {
  return RegularizerImpl(phi, per_env_batches, beta, rng, m, nullptr);
}

RegularizerResult RegularizerWithGrad(const Network& phi,
                                      std::span<const Tensor> per_env_batches,
                                      double beta, CounterRng& rng,
                                      std::size_t m) {
  RegularizerResult res;
  res.phi = Gradients::ZerosLike(phi);
  res.value = RegularizerImpl(phi, per_env_batches, beta, rng, m, &res.phi);
  return res;
}

ObjectiveResult TotalObjective(const Network& h, const Network& phi,
                               const Network* disc, const Batch& batch,
                               const ObjectiveConfig& cfg, CounterRng& rng) {
  cfg.Validate();
  batch.Validate(cfg.n_classes, cfg.n_envs);
  CheckChain(phi, h, "objective");
  if (h.out_dim() != static_cast<std::size_t>(cfg.n_classes)) {
    throw std::invalid_argument("objective: classifier output dim != n_classes");
  }
  const bool adversarial = IsAdversarial(cfg.criterion);
  if (adversarial && disc == nullptr) {
    throw std::invalid_argument("objective: adversarial criterion needs a discriminator");
  }

  ObjectiveResult res;
  auto phi_fwd = Forward(phi, batch.xs);
  auto h_fwd = Forward(h, phi_fwd.output);
  Tensor dlogits(batch.size(), h.out_dim());
  res.task_loss = BalancedRiskTerm(h_fwd.output, batch, cfg.n_classes, cfg.n_envs,
                                   &dlogits);
  if (cfg.criterion == Criterion::kIrm && cfg.lambda0 > 0.0) {
    res.inv_loss = IrmTerm(h_fwd.output, batch, cfg.n_envs, cfg.lambda0, &dlogits);
  }
  auto hb = Backward(h, h_fwd.tape, dlogits);
  res.h = std::move(hb.grads);
  Tensor dz = std::move(hb.dx);

  if (disc != nullptr) res.disc = Gradients::ZerosLike(*disc);
  if (adversarial && cfg.lambda0 > 0.0) {
    AdversarialTerm term = DomainTerm(phi_fwd.output, batch, *disc,
                                      cfg.criterion == Criterion::kCdann,
                                      cfg.n_classes, cfg.n_envs, cfg.lambda0);
    res.inv_loss = term.inv_loss;
    res.disc = std::move(term.disc);
    auto d = dz.data();
    auto a = term.dz.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= cfg.lambda0 * a[i];
  }
  res.phi = Backward(phi, phi_fwd.tape, dz).grads;

  if (cfg.lambda1 > 0.0) {
    const std::vector<Tensor> per_env = SplitByEnv(batch, cfg.n_envs);
    const std::size_t m = cfg.virtual_samples ? cfg.virtual_samples : batch.size();
    RegularizerResult reg = RegularizerWithGrad(phi, per_env, cfg.beta, rng, m);
    res.reg_value = reg.value;
    res.phi.AddScaled(reg.phi, cfg.lambda1);
  }
  res.loss = res.task_loss + cfg.lambda0 * res.inv_loss + cfg.lambda1 * res.reg_value;
  return res;
}

}  // namespace invgen::invariance
