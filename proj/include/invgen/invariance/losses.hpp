// invgen/invariance/losses.hpp

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

#ifndef INVGEN_INVARIANCE_LOSSES_HPP_
#define INVGEN_INVARIANCE_LOSSES_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "invgen/common/rng.hpp"
#include "invgen/diffcore/network.hpp"
#include "invgen/envbench/environment.hpp"

namespace invgen::invariance {

using diffcore::Gradients;
using diffcore::Network;
using diffcore::Tensor;

/// Samples stacked as rows with their labels and environment ids.
struct Batch {
  Tensor xs;
  std::vector<int> ys;
  std::vector<int> envs;

  std::size_t size() const { return ys.size(); }
  /// Throws std::invalid_argument on length mismatch, empty batch or ids
  /// outside [0, n_classes) / [0, n_envs).
  void Validate(int n_classes, int n_envs) const;
  /// Row indices grouped by environment id.
  std::vector<std::vector<std::size_t>> EnvIndex(int n_envs) const;
};

enum class Criterion { kErm, kDann, kCdann, kIrm };

std::string_view CriterionName(Criterion c);
Criterion ParseCriterion(std::string_view name);
bool IsAdversarial(Criterion c);

struct ObjectiveConfig {
  double lambda0 = 1.0;
  double lambda1 = 0.0;
  double beta = 1.0;
  Criterion criterion = Criterion::kErm;
  int n_classes = 2;
  int n_envs = 2;
  std::size_t virtual_samples = 0;  // 0: one per batch row

  void Validate() const;
};

struct CeResult {
  double loss = 0.0;
  std::vector<double> dlogits;
};

/// -log softmax(logits)[y] and its gradient softmax - onehot(y).
CeResult CrossEntropy(std::span<const double> logits, int y);

/// Value of a loss with gradients for the classifier h and embedding phi.
struct LossResult {
  double value = 0.0;
  Gradients h;
  Gradients phi;
};

/// Mean over environments of the mean over classes of the mean
/// cross-entropy in each (env, class) cell. Empty cells are skipped and the
/// remaining weights renormalised; a class missing from every environment
/// is an error.
LossResult BalancedRisk(const Network& h, const Network& phi, const Batch& batch,
                        int n_classes, int n_envs);

/// argmax of h(phi(x)) per row, ties to the lowest class index.
std::vector<int> PredictClasses(const Network& h, const Network& phi,
                                const Tensor& xs);

/// (1/K) sum_y mean over class-y rows of [pred != y]. Throws if a class has
/// no rows.
double BerFromPredictions(std::span<const int> ys, std::span<const int> preds,
                          int n_classes);

double BerEval(const Network& h, const Network& phi,
               const envbench::Environment& env);

/// Domain-discrimination loss with gradient reversal.
///
/// inv_loss is (1/T) sum_t of the mean cross-entropy of d(phi(x)) against
/// t over the rows of environment t. disc receives lambda0 times the
/// gradient of inv_loss (descending it maximises the domain
/// log-likelihood); phi receives lambda0 times the negated gradient.
struct AdversarialResult {
  double inv_loss = 0.0;
  Gradients phi;
  Gradients disc;
};

AdversarialResult DannLoss(const Network& phi, const Network& disc,
                           const Batch& batch, int n_envs, double lambda0 = 1.0);

/// As DannLoss, with the discriminator reading concat(phi(x), onehot(y)).
AdversarialResult CdannLoss(const Network& phi, const Network& disc,
                            const Batch& batch, int n_classes, int n_envs,
                            double lambda0 = 1.0);

/// g_t = d/dw of the mean cross-entropy of w * logits over environment t,
/// evaluated at w = 1.
std::vector<double> IrmScaleGradients(const Tensor& logits, const Batch& batch,
                                      int n_envs);

/// (1/T) sum_t g_t^2 with gradients for h and phi.
LossResult IrmPenalty(const Network& h, const Network& phi, const Batch& batch,
                      int n_envs);

/// Normalised Gamma(beta) draws. T = 1 returns {1}.
std::vector<double> DirichletSample(double beta, std::size_t t, CounterRng& rng);

/// sum_t gamma_t * xs[t], each xs[t] a 1 x d row.
Tensor VirtualSample(std::span<const Tensor> per_env_xs,
                     std::span<const double> gamma);

/// Mean of ||J_phi(x~)||_F^2 over m virtual samples. Each draw picks one
/// random row per environment batch and one gamma ~ Dirichlet(beta).
double Regularizer(const Network& phi, std::span<const Tensor> per_env_batches,
                   double beta, CounterRng& rng, std::size_t m);

struct RegularizerResult {
  double value = 0.0;
  Gradients phi;
};

RegularizerResult RegularizerWithGrad(const Network& phi,
                                      std::span<const Tensor> per_env_batches,
                                      double beta, CounterRng& rng,
                                      std::size_t m);

struct ObjectiveResult {
  double loss = 0.0;       // task + lambda0 * inv + lambda1 * reg
  double task_loss = 0.0;  // balanced risk
  double inv_loss = 0.0;   // domain CE or IRM penalty; 0 for ERM
  double reg_value = 0.0;  // mean squared Jacobian norm; 0 when lambda1 = 0
  Gradients h;
  Gradients phi;
  Gradients disc;  // empty unless the criterion is adversarial
};

/// Balanced risk plus the configured invariance term and regulariser. For
/// DANN/CDANN the phi gradient carries the reversed discriminator term, so
/// it is the gradient of task - lambda0 * inv + lambda1 * reg with the
/// discriminator held fixed. `disc` may be null for ERM and IRM.
ObjectiveResult TotalObjective(const Network& h, const Network& phi,
                               const Network* disc, const Batch& batch,
                               const ObjectiveConfig& cfg, CounterRng& rng);

}  // namespace invgen::invariance

#endif  // INVGEN_INVARIANCE_LOSSES_HPP_
