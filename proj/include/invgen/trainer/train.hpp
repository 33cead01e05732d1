// invgen/trainer/train.hpp

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

#ifndef INVGEN_TRAINER_TRAIN_HPP_
#define INVGEN_TRAINER_TRAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "invgen/envbench/environment.hpp"
#include "invgen/invariance/losses.hpp"
#include "invgen/trainer/optimizer.hpp"

namespace invgen::trainer {

using envbench::Environment;
using invariance::ObjectiveConfig;

struct TrainConfig {
  ObjectiveConfig objective;
  OptimizerConfig optimizer;
  std::size_t batch_size = 128;
  std::size_t steps = 4000;
  std::size_t log_every = 100;
  std::uint64_t seed = 0;
  double val_fraction = 0.2;

  // Selection grid. An empty list keeps the value above.
  std::vector<double> grid_lambda0;
  std::vector<double> grid_lambda1;
  std::vector<double> grid_lr;

  // phi: [in, hidden, latent] tanh. h: [latent, head_hidden, K], tanh then
  // identity. disc: [latent (+K for CDANN), disc_hidden, T], same shape as h.
  std::size_t hidden = 64;
  std::size_t latent = 16;
  std::size_t head_hidden = 32;
  std::size_t disc_hidden = 32;

  // Virtual samples on which the Jacobian norm is logged. Drawn once per
  // run, so every logged value uses the same points.
  std::size_t probe_size = 64;

  /// lr > 0, batch_size >= 1, steps >= 1, log_every >= 1 and a valid
  /// objective. Throws std::invalid_argument.
  void Validate() const;
};

struct HistoryRow {
  std::size_t step = 0;    // updates applied before the row was logged
  double task_loss = 0.0;
  double inv_loss = 0.0;
  double reg_value = 0.0;  // mean squared Jacobian norm on the batch draw
  double jfro = 0.0;       // mean ||J_phi||_F over the probe points
  double val_ber = 0.0;    // mean BER over the validation environments
};

struct RunHistory {
  std::vector<HistoryRow> rows;
};

struct TrainedModel {
  Network phi;
  Network h;
  std::optional<Network> disc;
  RunHistory history;
};

/// Mini-batch training of the combined objective. Rows are logged at step
/// 0, every log_every updates and after the last update. val_ber is
/// measured on `val_envs`, or on `envs` when none are given. cfg.objective
/// n_envs and n_classes are overwritten from the data.
TrainedModel Train(std::span<const Environment> envs, const TrainConfig& cfg,
                   std::span<const Environment> val_envs = {});

/// Rows per (env, class) cell for a batch: batch_size / cells each, the
/// remainder spread one at a time from the first cell.
std::vector<std::size_t> CellQuota(std::size_t batch_size, std::size_t cells);

/// Per-environment, per-class split. Every cell sends round(fraction * n)
/// rows to validation; throws std::invalid_argument if either side of any
/// cell would be empty.
std::pair<std::vector<Environment>, std::vector<Environment>> TrainValSplit(
    std::span<const Environment> envs, double fraction, std::uint64_t seed);

struct EvalResult {
  std::vector<double> per_class_accuracy;
  double ber = 0.0;
  double accuracy_per_class_mean = 0.0;  // exactly 1 - ber
};

/// Throws std::invalid_argument if a class has no rows.
EvalResult Evaluate(const Network& h, const Network& phi, const Environment& env);

struct SelectionRow {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double lr = 0.0;
  double val_ber = 0.0;
};

struct SelectionResult {
  TrainConfig best;
  std::vector<SelectionRow> table;
};

/// Trains one model per point of grid_lambda0 x grid_lambda1 x grid_lr on a
/// TrainValSplit of `envs` and keeps the lowest mean validation BER. Ties
/// go to the larger lambda1, then the earlier grid point. Only the
/// environments passed in are ever read. Throws std::invalid_argument when
/// all three grid lists are empty.
SelectionResult ModelSelect(std::span<const Environment> envs,
                            const TrainConfig& cfg);

/// step,task_loss,inv_loss,jfro,val_ber
void WriteHistoryCsv(std::ostream& os, const RunHistory& history);

/// env,class,acc
void WriteMetricsCsv(std::ostream& os,
                     const std::vector<std::pair<std::string, EvalResult>>& evals);

}  // namespace invgen::trainer

#endif  // INVGEN_TRAINER_TRAIN_HPP_
