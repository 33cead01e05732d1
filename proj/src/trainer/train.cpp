// invgen/trainer/train.cpp

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

#include "invgen/trainer/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "invgen/common/format.hpp"
#include "invgen/common/rng.hpp"
#include "invgen/diffcore/autodiff.hpp"

namespace invgen::trainer {

using invariance::Batch;
using invariance::Criterion;

namespace {

// Stream ids under CounterRng(cfg.seed).
enum Stream : std::uint64_t {
  kPhiInit = 1,
  kHeadInit = 2,
  kDiscInit = 3,
  kBatches = 4,
  kObjective = 5,
  kProbe = 6,
};

struct Cells {
  // index[t][c]: rows of environment t with label c.
  std::vector<std::vector<std::vector<std::size_t>>> index;
};

Cells BuildCells(std::span<const Environment> envs, int n_classes) {
  Cells cells;
  for (std::size_t t = 0; t < envs.size(); ++t) {
    auto by_class = envs[t].ClassIndex();
    by_class.resize(static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c) {
      if (by_class[c].empty()) {
        throw std::invalid_argument("Train: environment " + std::to_string(t) +
                                    " has no rows of class " + std::to_string(c));
      }
    }
    cells.index.push_back(std::move(by_class));
  }
  return cells;
}

Batch SampleBatch(std::span<const Environment> envs, const Cells& cells,
                  std::span<const std::size_t> quota, CounterRng& rng) {
  const std::size_t k = cells.index.front().size();
  std::size_t total = 0;
  for (std::size_t q : quota) total += q;
  Batch b;
  b.xs = Tensor(total, envs.front().dim());
  b.ys.reserve(total);
  b.envs.reserve(total);
  std::size_t row = 0;
  for (std::size_t t = 0; t < envs.size(); ++t) {
    for (std::size_t c = 0; c < k; ++c) {
      const auto& pool = cells.index[t][c];
      for (std::size_t i = 0; i < quota[t * k + c]; ++i) {
        const std::size_t src = pool[rng.Index(pool.size())];
        const auto from = envs[t].xs.row(src);
        std::copy(from.begin(), from.end(), b.xs.row(row).begin());
        b.ys.push_back(static_cast<int>(c));
        b.envs.push_back(static_cast<int>(t));
        ++row;
      }
    }
  }
  return b;
}

// Convex combinations of one random row per environment.
std::vector<Tensor> MakeProbe(std::span<const Environment> envs, double beta,
                              std::size_t count, CounterRng& rng) {
  std::vector<Tensor> probe;
  probe.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto gamma = invariance::DirichletSample(beta, envs.size(), rng);
    Tensor x(1, envs.front().dim());
    for (std::size_t t = 0; t < envs.size(); ++t) {
      const auto src = envs[t].xs.row(rng.Index(envs[t].size()));
      auto dst = x.row(0);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += gamma[t] * src[c];
    }
    probe.push_back(std::move(x));
  }
  return probe;
}

double ProbeJacobianNorm(const Network& phi, const std::vector<Tensor>& probe) {
  if (probe.empty()) return 0.0;
  double s = 0.0;
  for (const Tensor& x : probe) s += std::sqrt(diffcore::JacobianFrobeniusSq(phi, x));
  return s / static_cast<double>(probe.size());
}

double MeanBer(const Network& h, const Network& phi,
               std::span<const Environment> envs) {
  double s = 0.0;
  for (const Environment& e : envs) s += invariance::BerEval(h, phi, e);
  return s / static_cast<double>(envs.size());
}

}  // namespace

void TrainConfig::Validate() const {
  objective.Validate();
  optimizer.Validate();
  if (!(optimizer.lr > 0.0)) throw std::invalid_argument("train: lr must be > 0");
  if (batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
  if (steps < 1) throw std::invalid_argument("train: steps must be >= 1");
  if (log_every < 1) throw std::invalid_argument("train: log_every must be >= 1");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("train: val_fraction must be in (0, 1)");
  }
  if (hidden < 1 || latent < 1 || head_hidden < 1 || disc_hidden < 1) {
    throw std::invalid_argument("train: layer widths must be >= 1");
  }
}

std::vector<std::size_t> CellQuota(std::size_t batch_size, std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("CellQuota: no cells");
  std::vector<std::size_t> q(cells, batch_size / cells);
  for (std::size_t i = 0; i < batch_size % cells; ++i) ++q[i];
  return q;
}

TrainedModel Train(std::span<const Environment> envs, const TrainConfig& cfg_in,
                   std::span<const Environment> val_envs) {
  if (envs.empty()) throw std::invalid_argument("Train: no environments");
  TrainConfig cfg = cfg_in;
  cfg.objective.n_envs = static_cast<int>(envs.size());
  cfg.objective.n_classes = envs.front().n_classes;
  // A frozen model (lr = 0) is legal for selection grids; Validate below
  // insists on lr > 0, so check the rest with a placeholder rate.
  const double lr = cfg.optimizer.lr;
  if (lr == 0.0) cfg.optimizer.lr = 1.0;
  cfg.Validate();
  cfg.optimizer.lr = lr;
  const Criterion crit = cfg.objective.criterion;
  if (crit != Criterion::kErm && envs.size() < 2) {
    throw std::invalid_argument("Train: invariance criteria need >= 2 environments");
  }
  for (const Environment& e : envs) {
    e.Validate();
    if (e.dim() != envs.front().dim() || e.n_classes != envs.front().n_classes) {
      throw std::invalid_argument("Train: environments disagree on shape");
    }
  }
  for (const Environment& e : val_envs) {
    e.Validate();
    if (e.dim() != envs.front().dim()) {
      throw std::invalid_argument("Train: validation environment has wrong dim");
    }
  }
  const int k = cfg.objective.n_classes;
  const Cells cells = BuildCells(envs, k);
  const auto quota = CellQuota(cfg.batch_size, envs.size() * static_cast<std::size_t>(k));

  const CounterRng root(cfg.seed);
  const std::size_t in = envs.front().dim();
  const auto tanh = diffcore::Activation::kTanh;
  const auto ident = diffcore::Activation::kIdentity;
  TrainedModel model{
      diffcore::MakeNetwork(std::vector<std::size_t>{in, cfg.hidden, cfg.latent},
                            tanh, root.Fork(kPhiInit).key()),
      diffcore::MakeNetwork(
          std::vector<std::size_t>{cfg.latent, cfg.head_hidden,
                                   static_cast<std::size_t>(k)},
          tanh, ident, root.Fork(kHeadInit).key()),
      std::nullopt,
      {}};
  if (invariance::IsAdversarial(crit)) {
    const std::size_t disc_in =
        cfg.latent + (crit == Criterion::kCdann ? static_cast<std::size_t>(k) : 0);
    model.disc = diffcore::MakeNetwork(
        std::vector<std::size_t>{disc_in, cfg.disc_hidden, envs.size()}, tanh, ident,
        root.Fork(kDiscInit).key());
  }
  Optimizer opt_phi(cfg.optimizer, model.phi);
  Optimizer opt_h(cfg.optimizer, model.h);
  std::optional<Optimizer> opt_disc;
  if (model.disc) opt_disc.emplace(cfg.optimizer, *model.disc);

  CounterRng batch_rng = root.Fork(kBatches);
  CounterRng obj_rng = root.Fork(kObjective);
  CounterRng probe_rng = root.Fork(kProbe);
  const std::vector<Tensor> probe =
      MakeProbe(envs, cfg.objective.beta, cfg.probe_size, probe_rng);
  const std::span<const Environment> val = val_envs.empty() ? envs : val_envs;

  for (std::size_t step = 0; step <= cfg.steps; ++step) {
    const Batch batch = SampleBatch(envs, cells, quota, batch_rng);
    invariance::ObjectiveResult res = invariance::TotalObjective(
        model.h, model.phi, model.disc ? &*model.disc : nullptr, batch,
        cfg.objective, obj_rng);
    if (!std::isfinite(res.loss)) {
      throw std::domain_error("Train: non-finite loss at step " + std::to_string(step));
    }
    if (step % cfg.log_every == 0 || step == cfg.steps) {
      HistoryRow row;
      row.step = step;
      row.task_loss = res.task_loss;
      row.inv_loss = res.inv_loss;
      row.reg_value = res.reg_value;
      row.jfro = ProbeJacobianNorm(model.phi, probe);
      row.val_ber = MeanBer(model.h, model.phi, val);
      model.history.rows.push_back(row);
    }
    if (step == cfg.steps) break;
    opt_phi.Step(model.phi, res.phi);
    opt_h.Step(model.h, res.h);
    if (opt_disc) opt_disc->Step(*model.disc, res.disc);
  }
  return model;
}

std::pair<std::vector<Environment>, std::vector<Environment>> TrainValSplit(
    std::span<const Environment> envs, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("TrainValSplit: fraction must be in (0, 1)");
  }
  const CounterRng root(seed);
  std::vector<Environment> train, val;
  for (std::size_t t = 0; t < envs.size(); ++t) {
    CounterRng rng = root.Fork(t);
    std::vector<std::size_t> train_rows, val_rows;
    const auto by_class = envs[t].ClassIndex();
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      std::vector<std::size_t> rows = by_class[c];
      if (rows.empty()) continue;
      std::shuffle(rows.begin(), rows.end(), rng);
      const auto n_val = static_cast<std::size_t>(
          std::llround(fraction * static_cast<double>(rows.size())));
      if (n_val == 0 || n_val == rows.size()) {
        throw std::invalid_argument("TrainValSplit: environment " + std::to_string(t) +
                                    " class " + std::to_string(c) +
                                    " cannot be split at this fraction");
      }
      val_rows.insert(val_rows.end(), rows.begin(), rows.begin() + n_val);
      train_rows.insert(train_rows.end(), rows.begin() + n_val, rows.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    train.push_back(envs[t].Subset(train_rows));
    val.push_back(envs[t].Subset(val_rows));
  }
  return {std::move(train), std::move(val)};
}

EvalResult Evaluate(const Network& h, const Network& phi, const Environment& env) {
  env.Validate();
  const auto preds = invariance::PredictClasses(h, phi, env.xs);
  const auto k = static_cast<std::size_t>(env.n_classes);
  std::vector<double> hit(k, 0.0), count(k, 0.0);
  for (std::size_t i = 0; i < env.size(); ++i) {
    const auto y = static_cast<std::size_t>(env.ys[i]);
    count[y] += 1.0;
    if (preds[i] == env.ys[i]) hit[y] += 1.0;
  }
  EvalResult r;
  double sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (count[c] == 0.0) {
      throw std::invalid_argument("Evaluate: class " + std::to_string(c) +
                                  " missing from " + env.name);
    }
    r.per_class_accuracy.push_back(hit[c] / count[c]);
    sum += hit[c] / count[c];
  }
  r.accuracy_per_class_mean = sum / static_cast<double>(k);
  r.ber = 1.0 - r.accuracy_per_class_mean;
  return r;
}

SelectionResult ModelSelect(std::span<const Environment> envs,
                            const TrainConfig& cfg) {
  if (cfg.grid_lambda0.empty() && cfg.grid_lambda1.empty() && cfg.grid_lr.empty()) {
    throw std::invalid_argument("ModelSelect: empty grid");
  }
  auto or_default = [](const std::vector<double>& v, double d) {
    return v.empty() ? std::vector<double>{d} : v;
  };
  const auto l0s = or_default(cfg.grid_lambda0, cfg.objective.lambda0);
  const auto l1s = or_default(cfg.grid_lambda1, cfg.objective.lambda1);
  const auto lrs = or_default(cfg.grid_lr, cfg.optimizer.lr);
  const auto [train, val] = TrainValSplit(envs, cfg.val_fraction, cfg.seed);

  SelectionResult out;
  bool have = false;
  SelectionRow best_row;
  for (double l0 : l0s) {
    for (double l1 : l1s) {
      for (double lr : lrs) {
        TrainConfig point = cfg;
        point.objective.lambda0 = l0;
        point.objective.lambda1 = l1;
        point.optimizer.lr = lr;
        const TrainedModel m = Train(train, point, val);
        const double ber = MeanBer(m.h, m.phi, val);
        out.table.push_back({l0, l1, lr, ber});
        const bool better =
            !have || ber < best_row.val_ber ||
            (ber == best_row.val_ber && l1 > best_row.lambda1);
        if (better) {
          have = true;
          best_row = out.table.back();
          out.best = point;
        }
      }
    }
  }
  out.best.grid_lambda0.clear();
  out.best.grid_lambda1.clear();
  out.best.grid_lr.clear();
  return out;
}

void WriteHistoryCsv(std::ostream& os, const RunHistory& history) {
  CsvWriter w(os);
  w.Header({"step", "task_loss", "inv_loss", "jfro", "val_ber"});
  for (const HistoryRow& r : history.rows) {
    w.Field(r.step).Field(r.task_loss).Field(r.inv_loss).Field(r.jfro).Field(r.val_ber);
    w.EndRow();
  }
}

void WriteMetricsCsv(std::ostream& os,
                     const std::vector<std::pair<std::string, EvalResult>>& evals) {
  CsvWriter w(os);
  w.Header({"env", "class", "acc"});
  for (const auto& [name, r] : evals) {
    for (std::size_t c = 0; c < r.per_class_accuracy.size(); ++c) {
      w.Field(name).Field(c).Field(r.per_class_accuracy[c]);
      w.EndRow();
    }
  }
}

}  // namespace invgen::trainer
